// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>

#include "fogseal/bench.hpp"
#include "fogseal/hashcore.hpp"
#include "fogseal/netsim.hpp"
#include "fogseal/registry.hpp"
#include "fogseal/rng.hpp"
#include "fogseal/session.hpp"

using namespace fogseal;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int g_failures = 0;

void criterion(int n, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool in_time = secs < limit_s;
  const bool pass = o.ok && in_time;
  if (!pass) ++g_failures;
  std::printf("[%s] %2d %-28s %9.3fs (limit %gs) %s%s\n", pass ? "PASS" : "FAIL", n, title, secs, limit_s,
              o.detail.c_str(), in_time ? "" : " [over time limit]");
  std::fflush(stdout);
}

Outcome fail(std::string why) { return {false, std::move(why)}; }

SecretKey key_from(Rng& rng) {
  SecretKey::Array k{};
  rng.fill(k);
  return SecretKey(k);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// --- 1 ---------------------------------------------------------------------

Outcome memory() {
  const auto single = memory_footprint({107, 32, false});
  const auto dual = memory_footprint({107, 32, true});
  std::ostringstream d;
  d << "single " << single.total_bytes << "/" << single.global_bytes << " global, dual " << dual.total_bytes;
  return {single.total_bytes == 171 && single.global_bytes == 139 && dual.total_bytes == 176, d.str()};
}

// --- 2 ---------------------------------------------------------------------

Outcome hash_vectors() {
  const HashFn& h = find_hash(kDefaultHash);
  auto hex_of = [&h](std::string_view msg) {
    Digest d;
    h.digest(as_bytes(msg), d);
    return to_hex(d);
  };
  if (hex_of("abc") != "508c5e8c327c14e2e1a72ba34eeb452f37458b209ed63a294d999b4c86675982") {
    return fail("reference vector 'abc' mismatch");
  }
  if (hex_of("") != "69217a3079908094e11121d042354a7c1f55b6482ca1a51e1b250dfd1ed0eef9") {
    return fail("reference vector '' mismatch");
  }
  const auto frozen = parse_kat(read_file(std::string(FOGSEAL_TEST_DATA) + "/kat_blake2s256.txt"));
  if (frozen.size() != 16) return fail("frozen KAT file has " + std::to_string(frozen.size()) + " vectors");
  for (int pass = 0; pass < 2; ++pass) {
    const auto fresh = zero_key_vectors(16, h);
    for (std::size_t i = 0; i < 16; ++i) {
      if (format_kat(fresh[i]) != format_kat(frozen[i])) return fail("KAT ctr " + std::to_string(i + 1));
    }
  }
  return {true, "2 reference vectors, 16 frozen KATs x2"};
}

// --- 3 ---------------------------------------------------------------------

Outcome roundtrip() {
  Rng rng(3);
  const SecretKey sk = key_from(rng);
  Session a(sk), b(sk);
  std::size_t failures = 0;
  for (int i = 0; i < 10'000; ++i) {
    Bytes p(rng.below(kMaxPayload + 1));
    rng.fill(p);
    // alternating directions
    Session& tx = i % 2 ? a : b;
    Session& rx = i % 2 ? b : a;
    const auto out = rx.decrypt_next(tx.encrypt_next(p));
    if (!out || out->to_vector() != p) ++failures;
  }
  return {failures == 0, std::to_string(failures) + " failures / 10000"};
}

// --- 4 ---------------------------------------------------------------------

Outcome replay() {
  netsim::Scenario sc;
  sc.name = "replay";
  sc.seed = 4;
  sc.message_count = 1000;
  for (std::size_t i = 0; i < sc.message_count; ++i) sc.schedule.push_back(netsim::AdversaryAction::replay(i));
  const auto r = netsim::run_scenario(sc);
  if (r.replays_presented != 1000 || r.rejected != 1000 || r.undetected_modifications != 0 || r.delivered != 1000) {
    return fail("rejected " + std::to_string(r.rejected) + "/" + std::to_string(r.replays_presented) +
                ", undetected " + std::to_string(r.undetected_modifications));
  }

  // Counters are untouched by each rejected replay.
  Rng rng(44);
  const SecretKey sk = key_from(rng);
  Registry fog;
  const DeviceId id{7};
  fog.register_device(id, sk, CounterMode::dual, 1024);
  Session dev(sk);
  for (int i = 0; i < 1000; ++i) {
    const auto wire = encode_tuple(id, dev.encrypt_next(as_bytes("reading")));
    if (fog.handle_tuple(wire).outcome != TupleOutcome::accepted) return fail("genuine message rejected");
    const auto before = fog.status(id)->counters;
    if (fog.handle_tuple(wire).outcome != TupleOutcome::rejected) return fail("replay accepted");
    if (fog.status(id)->counters != before) return fail("replay reject moved counters");
  }
  return {true, "1000/1000 replays rejected, 0 undetected, counters unchanged"};
}

// --- 5 ---------------------------------------------------------------------

netsim::Scenario drop_scenario(std::size_t drops, std::size_t after, std::size_t window) {
  netsim::Scenario sc;
  sc.name = "desync";
  sc.seed = 5 + drops;
  sc.message_count = drops + after;
  sc.topology.window = window;
  sc.topology.stale_threshold = 16;
  for (std::size_t i = 0; i < drops; ++i) sc.schedule.push_back(netsim::AdversaryAction::drop());
  for (std::size_t i = 0; i < after; ++i) sc.schedule.push_back(netsim::AdversaryAction::pass());
  return sc;
}

Outcome desync() {
  constexpr std::size_t W = 64;
  for (std::size_t k = 0; k <= W; ++k) {
    const auto r = netsim::run_scenario(drop_scenario(k, 1, W));
    if (r.delivered != 1 || r.max_skipped != k || r.resync_recoveries != (k > 0 ? 1u : 0u)) {
      return fail("k=" + std::to_string(k) + " skipped " + std::to_string(r.max_skipped));
    }
  }
  const auto r = netsim::run_scenario(drop_scenario(W + 1, 40, W));
  if (r.delivered != 0 || r.rejected != 40) return fail("W+1 drops: delivered " + std::to_string(r.delivered));
  if (r.stale_devices.size() != 1) return fail("W+1 drops: device not flagged stale");
  return {true, "k=0..64 recovered with skipped=k; k=65 permanent reject, flagged stale"};
}

// --- 6 ---------------------------------------------------------------------

Outcome simultaneous_send() {
  Rng rng(6);
  const SecretKey sk = key_from(rng);
  auto interleave = [&sk](CounterMode mode) {
    const SessionOptions opts{mode, 0};
    Session a(sk, opts), b(sk, opts);
    const auto from_a = a.encrypt_next(as_bytes("a->b"));
    const auto from_b = b.encrypt_next(as_bytes("b->a"));
    const auto at_b = b.decrypt_next(from_a);
    const auto at_a = a.decrypt_next(from_b);
    return std::make_pair(at_b.has_value() && at_b->to_vector() == Bytes{'a', '-', '>', 'b'},
                          at_a.has_value() && at_a->to_vector() == Bytes{'b', '-', '>', 'a'});
  };
  const auto dual = interleave(CounterMode::dual);
  const auto single = interleave(CounterMode::single);
  const bool ok = dual.first && dual.second && !single.first && !single.second;
  std::string d = std::string("dual ") + (dual.first && dual.second ? "both accepted" : "FAILED") + ", single " +
                  (!single.first && !single.second ? "both rejected" : "NOT both rejected");
  return {ok, d};
}

// --- 7 ---------------------------------------------------------------------

Outcome census() {
  Rng rng(7);
  const SecretKey sk = key_from(rng);
  for (std::size_t len : {0u, 5u, 37u, 55u}) {
    Bytes p(len);
    rng.fill(p);
    const auto c = netsim::bitflip_census(sk, p, Counter(1 + rng.below(1'000'000)));
    std::size_t length_expected = 0;
    for (std::size_t pos = 0; pos < kBlockSize * 8; ++pos) {
      const std::size_t byte = pos / 8;
      const bool flipped_len_bad = byte == kLengthOffset && (len ^ (1u << (pos % 8))) > kMaxPayload;
      length_expected += flipped_len_bad;
      const bool expected = byte >= kCheckOffset || flipped_len_bad;
      if (c.detected[pos] != expected) return fail("len " + std::to_string(len) + " bit " + std::to_string(pos));
    }
    if (c.check_region_detected != 64 || c.data_region_detected != 0 ||
        c.length_byte_detected != length_expected) {
      return fail("region counts for len " + std::to_string(len));
    }
  }
  return {true, "64/64 check, 0/440 data, byte 55 exactly where length > 55 (lengths 0,5,37,55)"};
}

// --- 8 ---------------------------------------------------------------------

Outcome forgery() {
  Rng rng(8);
  const SecretKey sk = key_from(rng);
  const auto w0 = netsim::forgery_trial(sk, 1'000'000, 0, 81);
  const auto w1024 = netsim::forgery_trial(sk, 1'000'000, 1024, 82);
  std::ostringstream d;
  d << "passes W=0: " << w0 << ", W=1024: " << w1024 << " (expected " << std::scientific
    << std::setprecision(2) << netsim::expected_forgeries(1'000'000, 1024) << ")";
  return {w0 == 0 && w1024 == 0, d.str()};
}

// --- 9 ---------------------------------------------------------------------

Outcome bench_sanity() {
  const bench::BenchOptions opts{200'000, 21, 1};
  const auto online = bench::run_scheme("proposed", opts);
  const auto pre = bench::run_scheme("proposed-precomputed", opts);
  const double floor_us = bench::raw_hash_xor_us_per_block(opts);

  const double enc = online.encrypt_us_per_byte, dec = online.decrypt_us_per_byte;
  const double asym = std::abs(enc - dec) / std::min(enc, dec);
  const double per_block = std::max(enc, dec) * kBlockSize;
  const bool a = asym <= 0.05;
  const bool b = per_block <= 2.0 * floor_us;
  const bool c = pre.encrypt_us_per_byte < enc && pre.decrypt_us_per_byte < dec;

  std::ostringstream d;
  d << std::setprecision(4) << "(a) enc " << enc << " dec " << dec << " us/B, diff " << asym * 100 << "% "
    << (a ? "ok" : "BAD") << "; (b) " << per_block << " us/block vs raw " << floor_us << " "
    << (b ? "ok" : "BAD") << "; (c) precomputed enc " << pre.encrypt_us_per_byte << " "
    << (c ? "ok" : "BAD");
  return {a && b && c, d.str()};
}

// --- 10 --------------------------------------------------------------------

Outcome fuzz() {
  Rng rng(10);
  Registry fog;
  std::vector<DeviceId> ids;
  std::vector<Session> devices;
  for (std::uint64_t i = 1; i <= 8; ++i) {
    const SecretKey sk = key_from(rng);
    ids.push_back(DeviceId{i * 0x1111});
    devices.emplace_back(sk, SessionOptions{CounterMode::dual, 16});
    fog.register_device(ids.back(), sk, CounterMode::dual, 16);
  }
  auto snapshot = [&] {
    std::vector<CounterSnapshot> s;
    for (auto id : ids) s.push_back(fog.status(id)->counters);
    return s;
  };

  std::uint64_t counts[4] = {};
  std::uint64_t genuine = 0;
  for (int i = 0; i < 100'000; ++i) {
    Bytes input;
    std::size_t owner = rng.below(ids.size());
    const auto pick = rng.below(100);
    if (pick < 2) {
      // genuine traffic keeps the accept path in the mix
      const auto wire = encode_tuple(ids[owner], devices[owner].encrypt_next(as_bytes("ok")));
      input.assign(wire.begin(), wire.end());
      ++genuine;
    } else if (pick < 30) {
      input.resize(kTupleSize);
      rng.fill(input);
      const auto idb = ids[owner].to_bytes();
      std::copy(idb.begin(), idb.end(), input.begin());
    } else {
      input.resize(rng.below(1025));
      rng.fill(input);
    }
    const auto before = snapshot();
    const TupleResult r = fog.handle_tuple(input);
    const auto after = snapshot();
    const int o = static_cast<int>(r.outcome);
    if (o < 0 || o > 3) return fail("undeclared outcome");
    ++counts[o];
    for (std::size_t d = 0; d < ids.size(); ++d) {
      const bool may_change = r.outcome == TupleOutcome::accepted && r.id == ids[d];
      if (!may_change && before[d] != after[d]) return fail("session of a non-accepting device changed");
    }
  }
  std::ostringstream d;
  d << "accepted " << counts[0] << " (genuine " << genuine << "), framing " << counts[1] << ", unknown "
    << counts[2] << ", rejected " << counts[3];
  return {counts[0] == genuine, d.str()};
}

}  // namespace

int main() {
  criterion(1, "memory formula", 0.001, memory);
  criterion(2, "hash correctness", 1, hash_vectors);
  criterion(3, "roundtrip property", 10, roundtrip);
  criterion(4, "replay rejection", 10, replay);
  criterion(5, "desync recovery", 30, desync);
  criterion(6, "simultaneous send", 1, simultaneous_send);
  criterion(7, "bit-flip census", 5, census);
  criterion(8, "forgery bound", 60, forgery);
  criterion(9, "benchmark sanity", 120, bench_sanity);
  criterion(10, "fuzz / state safety", 60, fuzz);
  std::printf("%s: %d of 10 criteria failed\n", g_failures ? "FAIL" : "PASS", g_failures);
  return g_failures ? 1 : 0;
}
