#include "cli.hpp"

#include <openssl/rand.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "fogseal/bench.hpp"
#include "fogseal/errors.hpp"
#include "fogseal/hashcore.hpp"
#include "fogseal/netsim.hpp"
#include "fogseal/registry.hpp"
#include "fogseal/rng.hpp"

namespace fogseal::cli {

namespace fs = std::filesystem;

namespace {

class IoError : public Error {
 public:
  using Error::Error;
};

std::string read_all(const std::string& path, std::istream& stdin_stream) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(stdin_stream), std::istreambuf_iterator<char>()};
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_out(const std::string& path, std::string_view content, std::ostream& stdout_stream) {
  if (path == "-") {
    stdout_stream.write(content.data(), static_cast<std::streamsize>(content.size()));
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw IoError("write failed: " + path);
}

Registry load_registry(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open state file " + path);
  return Registry::load_state(f);
}

void save_registry(const Registry& reg, const std::string& path) {
  try {
    reg.save_state_file(path);
  } catch (const Error& e) {
    throw IoError(e.what());
  }
}

// --- keygen ---------------------------------------------------------------

struct KeygenArgs {
  std::string out;
  std::optional<std::uint64_t> seed;
  bool force = false;
  std::string id = "0000000000000001";
  std::string mode = "dual";
  std::size_t window = 1024;
};

int cmd_keygen(const KeygenArgs& a, std::ostream& out) {
  const DeviceId id = DeviceId::from_hex(a.id);
  const CounterMode mode = parse_counter_mode(a.mode);
  SecretKey::Array key{};
  if (a.seed) {
    Rng rng(*a.seed);
    rng.fill(key);
  } else if (RAND_bytes(key.data(), static_cast<int>(key.size())) != 1) {
    throw Error("system random generator failed");
  }
  const fs::path device = a.out + ".device.state";
  const fs::path fog = a.out + ".fog.state";
  for (const auto& p : {device, fog}) {
    if (!a.force && fs::exists(p)) throw IoError(p.string() + " exists; pass --force to overwrite");
  }
  // Both parties start from identical state: same key, counters at zero.
  Registry reg;
  reg.register_device(id, SecretKey(key), mode, a.window);
  save_registry(reg, device.string());
  save_registry(reg, fog.string());
  out << "wrote " << device.string() << "\nwrote " << fog.string() << '\n';
  return kOk;
}

// --- send / recv ------------------------------------------------------------

struct SendArgs {
  std::string state;
  std::string in = "-";
  std::string id;
  bool hex = false;
};

int cmd_send(const SendArgs& a, std::istream& in, std::ostream& out) {
  Registry reg = load_registry(a.state);
  DeviceId id;
  if (!a.id.empty()) {
    id = DeviceId::from_hex(a.id);
  } else {
    const auto ids = reg.device_ids();
    if (ids.size() != 1) throw ValidationError("state file holds several devices; pass --id");
    id = ids.front();
  }
  const std::string data = read_all(a.in, in);
  const ByteView bytes = as_bytes(data);

  std::string wire_out;
  std::size_t offset = 0;
  do {
    const std::size_t n = std::min(kMaxPayload, bytes.size() - offset);
    const auto wire = reg.encrypt_for_device(id, bytes.subspan(offset, n));
    offset += n;
    if (a.hex) {
      wire_out += to_hex(wire);
      wire_out += '\n';
    } else {
      wire_out.append(reinterpret_cast<const char*>(wire.data()), wire.size());
    }
  } while (offset < bytes.size());

  save_registry(reg, a.state);
  out.write(wire_out.data(), static_cast<std::streamsize>(wire_out.size()));
  return kOk;
}

bool looks_like_hex(std::string_view data) {
  std::size_t digits = 0;
  for (char c : data) {
    if (std::isxdigit(static_cast<unsigned char>(c))) {
      ++digits;
    } else if (c != '\n' && c != '\r' && c != ' ' && c != '\t') {
      return false;
    }
  }
  return digits > 0 && digits % (2 * kTupleSize) == 0;
}

std::vector<Bytes> split_wire(std::string_view data, bool hex) {
  std::vector<Bytes> tuples;
  if (hex) {
    std::istringstream lines{std::string(data)};
    std::string line;
    while (std::getline(lines, line)) {
      std::string digits;
      for (char c : line) {
        if (!std::isspace(static_cast<unsigned char>(c))) digits.push_back(c);
      }
      if (digits.empty()) continue;
      Bytes t(digits.size() / 2);
      if (digits.size() % 2 != 0 || !try_from_hex(digits, t)) t.clear();  // framing error below
      tuples.push_back(std::move(t));
    }
    return tuples;
  }
  for (std::size_t off = 0; off < data.size(); off += kTupleSize) {
    const auto chunk = data.substr(off, kTupleSize);
    const ByteView b = as_bytes(chunk);
    tuples.emplace_back(b.begin(), b.end());
  }
  return tuples;
}

struct RecvArgs {
  std::string state;
  std::string in = "-";
  std::optional<std::size_t> window;
  bool hex = false;
};

int cmd_recv(const RecvArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  Registry reg = load_registry(a.state);
  std::vector<std::pair<DeviceId, std::size_t>> saved_windows;
  if (a.window) {
    for (DeviceId id : reg.device_ids()) {
      saved_windows.emplace_back(id, reg.status(id)->resync_window);
      reg.set_resync_window(id, *a.window);
    }
  }
  const std::string data = read_all(a.in, in);
  const bool hex = a.hex || looks_like_hex(data);

  std::string payloads;
  bool any_reject = false;
  std::size_t index = 0;
  for (const Bytes& wire : split_wire(data, hex)) {
    const TupleResult r = reg.handle_tuple(wire);
    err << "tuple " << index++ << ": " << to_string(r.outcome);
    if (r.outcome != TupleOutcome::framing_error) err << " id=" << r.id.to_hex();
    if (r.outcome == TupleOutcome::accepted) {
      err << " len=" << r.payload.size() << " skipped=" << r.skipped;
      if (r.skipped > 0) err << " (resynchronized)";
      payloads.append(reinterpret_cast<const char*>(r.payload.data()), r.payload.size());
    } else {
      any_reject = true;
    }
    err << '\n';
  }
  for (const auto& [id, w] : saved_windows) reg.set_resync_window(id, w);
  save_registry(reg, a.state);
  out.write(payloads.data(), static_cast<std::streamsize>(payloads.size()));
  return any_reject ? kReject : kOk;
}

// --- vectors / bench / scenario ----------------------------------------------

struct VectorsArgs {
  std::string hash{kDefaultHash};
  std::size_t count = 16;
  std::string out = "-";
};

int cmd_vectors(const VectorsArgs& a, std::ostream& out) {
  const HashFn& h = find_hash(a.hash);
  std::string text = "# hash=" + h.name + "\n# sk_hex ctr_hex keystream_hex\n";
  for (const auto& v : zero_key_vectors(a.count, h)) text += format_kat(v) + "\n";
  write_out(a.out, text, out);
  return kOk;
}

struct BenchArgs {
  std::string schemes = "proposed,proposed-precomputed,aes256-ctr";
  std::size_t blocks = 100'000;
  std::size_t runs = 5;
  std::string csv;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  std::vector<std::string> schemes;
  std::stringstream list(a.schemes);
  for (std::string s; std::getline(list, s, ',');) {
    if (s.empty()) continue;
    const auto& known = bench::scheme_names();
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      throw ValidationError("unknown bench scheme '" + s + "'");
    }
    schemes.push_back(s);
  }
  if (schemes.empty()) throw ValidationError("no bench schemes given");
  const bench::BenchOptions opts{a.blocks, a.runs, 1};
  std::string csv = bench::csv_header() + "\n";
  for (const auto& s : schemes) csv += bench::csv_row(bench::run_scheme(s, opts)) + "\n";
  if (a.csv.empty()) {
    out << csv;
  } else {
    write_out(a.csv, csv, out);
    out << "wrote " << a.csv << '\n';
  }
  return kOk;
}

struct ScenarioArgs {
  std::string file;
  std::string report;
};

int cmd_scenario(const ScenarioArgs& a, std::istream& in, std::ostream& out) {
  const netsim::Scenario sc = netsim::parse_scenario(read_all(a.file, in));
  const netsim::ScenarioReport report = netsim::run_scenario(sc);
  out << netsim::report_table(report);
  if (!a.report.empty()) write_out(a.report, netsim::report_to_json(report), out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"fogseal: hash-keystream encryption for IoT and fog nodes"};
  app.require_subcommand(1);

  KeygenArgs keygen;
  auto* k = app.add_subcommand("keygen", "Generate a key and both parties' state files");
  k->add_option("--out", keygen.out, "Output prefix; writes <out>.device.state and <out>.fog.state")
      ->required();
  k->add_option("--seed", keygen.seed, "Deterministic seed (tests only)");
  k->add_flag("--force", keygen.force, "Overwrite existing files");
  k->add_option("--id", keygen.id, "Device id, 16 hex digits");
  k->add_option("--mode", keygen.mode, "single or dual");
  k->add_option("--window", keygen.window, "Resync window");

  SendArgs send;
  auto* s = app.add_subcommand("send", "Encrypt input into 72-byte tuples");
  s->add_option("--state", send.state, "State file")->required();
  s->add_option("--in", send.in, "Input file or - for stdin");
  s->add_option("--id", send.id, "Device id when the state file holds several");
  s->add_flag("--hex", send.hex, "Emit one hex tuple per line");

  RecvArgs recv;
  auto* r = app.add_subcommand("recv", "Decrypt tuples and print the payloads");
  r->add_option("--state", recv.state, "State file")->required();
  r->add_option("--in", recv.in, "Input file or - for stdin");
  r->add_option("--window", recv.window, "Resync window for this run");
  r->add_flag("--hex", recv.hex, "Input is hex, one tuple per line (auto-detected otherwise)");

  VectorsArgs vectors;
  auto* v = app.add_subcommand("vectors", "Emit known-answer keystream vectors");
  v->add_option("--hash", vectors.hash, "Hash name");
  v->add_option("--count", vectors.count, "Number of vectors (counters 1..count)");
  v->add_option("--out", vectors.out, "Output file or -");

  BenchArgs benchargs;
  auto* b = app.add_subcommand("bench", "Time encrypt/decrypt per byte");
  b->add_option("--schemes", benchargs.schemes, "Comma list of schemes");
  b->add_option("--blocks", benchargs.blocks, "Blocks per timed run");
  b->add_option("--runs", benchargs.runs, "Timed runs (median reported)");
  b->add_option("--csv", benchargs.csv, "CSV output path");

  ScenarioArgs scenario;
  auto* sc = app.add_subcommand("scenario", "Run an adversarial channel scenario");
  sc->add_option("--file", scenario.file, "Scenario JSON")->required();
  sc->add_option("--report", scenario.report, "JSON report output path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    if (*k) return cmd_keygen(keygen, out);
    if (*s) return cmd_send(send, in, out);
    if (*r) return cmd_recv(recv, in, out, err);
    if (*v) return cmd_vectors(vectors, out);
    if (*b) return cmd_bench(benchargs, out);
    if (*sc) return cmd_scenario(scenario, in, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const UnknownHash& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const RekeyRequired& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const UnknownDevice& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}

}  // namespace fogseal::cli
