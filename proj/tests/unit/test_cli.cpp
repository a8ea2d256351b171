#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "../../tools/cli.hpp"
#include "fogseal/bytes.hpp"
#include "fogseal/rng.hpp"

namespace fs = std::filesystem;
using namespace fogseal;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args, const std::string& stdin_data = "") {
  std::istringstream in(stdin_data);
  std::ostringstream out, err;
  const int code = fogseal::cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("fogseal_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    prefix = (dir / "k").string();
  }
  void TearDown() override { fs::remove_all(dir); }

  void keygen(std::vector<std::string> extra = {}) {
    std::vector<std::string> args{"keygen", "--out", prefix, "--seed", "42"};
    args.insert(args.end(), extra.begin(), extra.end());
    ASSERT_EQ(invoke(args).code, 0);
  }
  std::string device() const { return prefix + ".device.state"; }
  std::string fog() const { return prefix + ".fog.state"; }

  fs::path dir;
  std::string prefix;
};

}  // namespace

TEST_F(CliTest, KeygenSeedIsReproducibleAndStatesMatch) {
  keygen();
  const std::string first = slurp(device());
  EXPECT_EQ(first, slurp(fog()));
  EXPECT_EQ(invoke({"keygen", "--out", prefix, "--seed", "42", "--force"}).code, 0);
  EXPECT_EQ(slurp(device()), first);
}

TEST_F(CliTest, UnseededKeysDiffer) {
  ASSERT_EQ(invoke({"keygen", "--out", prefix + "a"}).code, 0);
  ASSERT_EQ(invoke({"keygen", "--out", prefix + "b"}).code, 0);
  EXPECT_NE(slurp(prefix + "a.device.state"), slurp(prefix + "b.device.state"));
}

TEST_F(CliTest, KeygenRefusesToOverwrite) {
  keygen();
  EXPECT_EQ(invoke({"keygen", "--out", prefix, "--seed", "1"}).code, 3);
  EXPECT_EQ(invoke({"keygen", "--out", prefix, "--seed", "1", "--mode", "triple", "--force"}).code, 4);
}

TEST_F(CliTest, SendTupleCounts) {
  keygen();
  EXPECT_EQ(invoke({"send", "--state", device()}, "hello").out.size(), 72u);
  EXPECT_EQ(invoke({"send", "--state", device()}, std::string(120, 'x')).out.size(), 3u * 72u);
  EXPECT_EQ(invoke({"send", "--state", device()}, "").out.size(), 72u);
  const auto hex = invoke({"send", "--state", device(), "--hex"}, "abc");
  EXPECT_EQ(hex.out.size(), 145u);
}

TEST_F(CliTest, SendRecvRoundTrip) {
  keygen();
  const auto wire = invoke({"send", "--state", device()}, "temperature=21.5C");
  ASSERT_EQ(wire.code, 0);
  const auto got = invoke({"recv", "--state", fog()}, wire.out);
  EXPECT_EQ(got.code, 0);
  EXPECT_EQ(got.out, "temperature=21.5C");
  EXPECT_NE(got.err.find("accepted"), std::string::npos);
  // Counters persisted: the same tuple is now a replay.
  EXPECT_EQ(invoke({"recv", "--state", fog()}, wire.out).code, 2);
}

TEST_F(CliTest, FilesInsteadOfStdin) {
  keygen();
  const auto msg = dir / "msg.txt";
  const auto wire = dir / "wire.bin";
  std::ofstream(msg) << "from a file";
  const auto sent = invoke({"send", "--state", device(), "--in", msg.string()});
  std::ofstream(wire, std::ios::binary) << sent.out;
  EXPECT_EQ(invoke({"recv", "--state", fog(), "--in", wire.string()}).out, "from a file");
  EXPECT_EQ(invoke({"recv", "--state", fog(), "--in", (dir / "missing").string()}).code, 3);
  EXPECT_EQ(invoke({"send", "--state", (dir / "nostate").string()}, "x").code, 3);
}

TEST_F(CliTest, TamperedHexIsRejected) {
  keygen();
  auto hex = invoke({"send", "--state", device(), "--hex"}, "hello").out;
  hex[17 * 2] = hex[17 * 2] == '0' ? '1' : '0';  // inside the encrypted padding
  hex[70 * 2] = hex[70 * 2] == '0' ? '1' : '0';  // inside the check bytes
  const auto got = invoke({"recv", "--state", fog()}, hex);
  EXPECT_EQ(got.code, 2);
  EXPECT_TRUE(got.out.empty());
  EXPECT_NE(got.err.find("rejected"), std::string::npos);
}

TEST_F(CliTest, WindowOptionResynchronizes) {
  keygen({"--window", "0"});
  for (int i = 0; i < 3; ++i) invoke({"send", "--state", device()}, "lost");
  const auto wire = invoke({"send", "--state", device(), "--hex"}, "arrives").out;
  const auto narrow = dir / "narrow.state";
  fs::copy_file(fog(), narrow);
  EXPECT_EQ(invoke({"recv", "--state", narrow.string()}, wire).code, 2);
  const auto got = invoke({"recv", "--state", fog(), "--window", "16"}, wire);
  EXPECT_EQ(got.code, 0);
  EXPECT_EQ(got.out, "arrives");
  EXPECT_NE(got.err.find("skipped=3"), std::string::npos);
  EXPECT_NE(slurp(fog()).find(" dual 0 "), std::string::npos);
}

TEST_F(CliTest, MalformedStateFileIsValidationError) {
  keygen();
  std::ofstream(fog(), std::ios::trunc) << "# header\n0000000000000001 zz dual 0 0 0\n";
  const auto got = invoke({"recv", "--state", fog()}, "");
  EXPECT_EQ(got.code, 4);
  EXPECT_NE(got.err.find("line 2"), std::string::npos);
}

TEST(CliVectors, MatchFrozenFile) {
  const auto r = invoke({"vectors", "--count", "1"});
  ASSERT_EQ(r.code, 0);
  std::ifstream f(std::string(FOGSEAL_TEST_DATA) + "/kat_blake2s256.txt");
  std::string h1, h2, first;
  std::getline(f, h1);
  std::getline(f, h2);
  std::getline(f, first);
  EXPECT_EQ(r.out, h1 + "\n" + h2 + "\n" + first + "\n");
  EXPECT_EQ(invoke({"vectors", "--count", "0"}).out, h1 + "\n" + h2 + "\n");
  const auto all = invoke({"vectors"});
  EXPECT_EQ(all.out, slurp(std::string(FOGSEAL_TEST_DATA) + "/kat_blake2s256.txt"));
}

TEST(CliVectors, UnknownHash) { EXPECT_EQ(invoke({"vectors", "--hash", "sha1"}).code, 4); }

TEST(CliUsage, Errors) {
  EXPECT_EQ(invoke({}).code, 1);
  EXPECT_EQ(invoke({"frobnicate"}).code, 1);
  EXPECT_EQ(invoke({"send"}).code, 1);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(CliBench, UnknownSchemeAndSmallRun) {
  EXPECT_EQ(invoke({"bench", "--schemes", "des"}).code, 4);
  const auto r = invoke({"bench", "--schemes", "proposed", "--blocks", "50", "--runs", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("scheme,encrypt_us_per_byte", 0), 0u);
}

TEST(CliScenario, BundledAndMalformed) {
  const std::string dir = FOGSEAL_SCENARIOS;
  const auto report = fs::temp_directory_path() / "fogseal_cli_report.json";
  const auto r = invoke({"scenario", "--file", dir + "/replay.json", "--report", report.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("replays presented"), std::string::npos);
  EXPECT_NE(slurp(report).find("\"replays_presented\": 100"), std::string::npos);
  fs::remove(report);
  EXPECT_EQ(invoke({"scenario", "--file", "-"}, "{\"seed\": 1}").code, 4);
  EXPECT_EQ(invoke({"scenario", "--file", "-"}, "not json").code, 4);
  EXPECT_EQ(invoke({"scenario", "--file", dir + "/absent.json"}).code, 3);
}

TEST_F(CliTest, RandomBinaryRoundTrips) {
  keygen();
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    Bytes data(rng.below(8193));
    rng.fill(data);
    const std::string msg(data.begin(), data.end());
    const auto wire = invoke({"send", "--state", device()}, msg);
    ASSERT_EQ(wire.code, 0);
    ASSERT_EQ(wire.out.size(), 72u * std::max<std::size_t>(1, (data.size() + 54) / 55));
    const auto got = invoke({"recv", "--state", fog()}, wire.out);
    ASSERT_EQ(got.code, 0) << got.err;
    ASSERT_EQ(got.out, msg) << "trial " << trial;
  }
}
