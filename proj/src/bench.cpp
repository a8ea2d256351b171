#include "fogseal/bench.hpp"

#include <openssl/evp.h>
#include <sys/utsname.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <memory>
#include <sstream>

#include "fogseal/errors.hpp"
#include "fogseal/session.hpp"

namespace fogseal::bench {

namespace {

using Clock = std::chrono::steady_clock;

volatile std::uint8_t g_sink = 0;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

double elapsed_us(Clock::time_point start) {
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

const SecretKey& bench_key() {
  static const SecretKey key = [] {
    SecretKey::Array k{};
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = static_cast<std::uint8_t>(0x5a ^ (i * 29));
    return SecretKey(k);
  }();
  return key;
}

std::array<std::uint8_t, kMaxPayload> bench_payload() {
  std::array<std::uint8_t, kMaxPayload> p{};
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<std::uint8_t>(i * 7 + 3);
  return p;
}

struct Timings {
  std::vector<double> encrypt_us;
  std::vector<double> decrypt_us;
  std::vector<double> setup_us;
};

BenchRow finish(std::string_view scheme, const BenchOptions& opts, const Timings& t, bool has_setup) {
  const double bytes = static_cast<double>(opts.blocks * kBlockSize);
  BenchRow row;
  row.scheme = std::string(scheme);
  row.encrypt_us_per_byte = median(t.encrypt_us) / bytes;
  row.decrypt_us_per_byte = median(t.decrypt_us) / bytes;
  if (has_setup) row.key_setup_us = median(t.setup_us);
  row.blocks = opts.blocks;
  row.runs = opts.runs;
  row.host = host_description();
  return row;
}

// Encrypt and decrypt alternate over one cache-resident chunk of blocks.
constexpr std::size_t kChunk = 100;

BenchRow bench_proposed(std::string_view scheme, const BenchOptions& opts, bool precomputed) {
  Session sender(bench_key());
  Session receiver(bench_key());
  const auto payload = bench_payload();
  std::vector<CipherBlock> wire(std::min(kChunk, opts.blocks));
  Timings t;
  for (std::size_t run = 0; run < opts.warmup_runs + opts.runs; ++run) {
    double setup = 0.0;
    if (precomputed) {
      const auto s0 = Clock::now();
      sender.precompute_encrypt(opts.blocks);
      receiver.precompute_decrypt(opts.blocks);
      setup = elapsed_us(s0);
    }
    double enc = 0.0, dec = 0.0;
    std::uint8_t acc = 0;
    for (std::size_t done = 0; done < opts.blocks; done += wire.size()) {
      const std::size_t n = std::min(wire.size(), opts.blocks - done);
      const auto e0 = Clock::now();
      for (std::size_t i = 0; i < n; ++i) wire[i] = sender.encrypt_next(payload);
      enc += elapsed_us(e0);

      const auto d0 = Clock::now();
      for (std::size_t i = 0; i < n; ++i) {
        const auto p = receiver.decrypt_next(wire[i]);
        acc ^= p ? p->data()[0] : 0xff;
      }
      dec += elapsed_us(d0);
    }
    g_sink = g_sink ^ acc;
    if (run < opts.warmup_runs) continue;
    t.encrypt_us.push_back(enc);
    t.decrypt_us.push_back(dec);
    t.setup_us.push_back(setup);
  }
  return finish(scheme, opts, t, precomputed);
}

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* c) const noexcept { EVP_CIPHER_CTX_free(c); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

BenchRow bench_aes_ctr(std::string_view scheme, const BenchOptions& opts) {
  std::array<std::uint8_t, 32> key{};
  std::array<std::uint8_t, 16> iv{};
  for (std::size_t i = 0; i < key.size(); ++i) key[i] = static_cast<std::uint8_t>(i + 1);
  const auto payload = bench_payload();
  Block plain{};
  std::copy(payload.begin(), payload.end(), plain.begin());

  CipherCtx enc(EVP_CIPHER_CTX_new());
  CipherCtx dec(EVP_CIPHER_CTX_new());
  if (!enc || !dec) throw Error("EVP_CIPHER_CTX_new failed");
  constexpr int kSetupReps = 1000;
  std::vector<Block> wire(std::min(kChunk, opts.blocks));
  Timings t;
  for (std::size_t run = 0; run < opts.warmup_runs + opts.runs; ++run) {
    const auto s0 = Clock::now();
    for (int i = 0; i < kSetupReps; ++i) {
      if (EVP_EncryptInit_ex(enc.get(), EVP_aes_256_ctr(), nullptr, key.data(), iv.data()) != 1) {
        throw Error("AES-256-CTR init failed");
      }
    }
    const double setup = elapsed_us(s0) / kSetupReps;
    if (EVP_DecryptInit_ex(dec.get(), EVP_aes_256_ctr(), nullptr, key.data(), iv.data()) != 1) {
      throw Error("AES-256-CTR init failed");
    }

    int len = 0;
    double e = 0.0, d = 0.0;
    Block out{};
    std::uint8_t acc = 0;
    for (std::size_t done = 0; done < opts.blocks; done += wire.size()) {
      const std::size_t n = std::min(wire.size(), opts.blocks - done);
      const auto e0 = Clock::now();
      for (std::size_t i = 0; i < n; ++i) {
        EVP_EncryptUpdate(enc.get(), wire[i].data(), &len, plain.data(), static_cast<int>(kBlockSize));
      }
      e += elapsed_us(e0);

      const auto d0 = Clock::now();
      for (std::size_t i = 0; i < n; ++i) {
        EVP_DecryptUpdate(dec.get(), out.data(), &len, wire[i].data(), static_cast<int>(kBlockSize));
        acc ^= out[0];
      }
      d += elapsed_us(d0);
    }
    g_sink = g_sink ^ acc;
    if (run < opts.warmup_runs) continue;
    t.encrypt_us.push_back(e);
    t.decrypt_us.push_back(d);
    t.setup_us.push_back(setup);
  }
  return finish(scheme, opts, t, true);
}

}  // namespace

const std::vector<std::string>& scheme_names() {
  static const std::vector<std::string> names{"proposed", "proposed-precomputed", "aes256-ctr"};
  return names;
}

BenchRow run_scheme(std::string_view scheme, const BenchOptions& opts) {
  if (opts.blocks == 0 || opts.runs == 0) throw ValidationError("bench needs blocks >= 1 and runs >= 1");
  if (scheme == "proposed") return bench_proposed(scheme, opts, false);
  if (scheme == "proposed-precomputed") return bench_proposed(scheme, opts, true);
  if (scheme == "aes256-ctr") return bench_aes_ctr(scheme, opts);
  throw ValidationError("unknown bench scheme '" + std::string(scheme) + "'");
}

double raw_hash_xor_us_per_block(const BenchOptions& opts) {
  const HashFn& h = find_hash(kDefaultHash);
  HashInput input = key_input(bench_key(), Counter(1));
  Block block{};
  std::vector<double> samples;
  std::uint64_t ctr = 1;
  for (std::size_t run = 0; run < opts.warmup_runs + opts.runs; ++run) {
    const auto t0 = Clock::now();
    for (std::size_t i = 0; i < opts.blocks; ++i) {
      input[kHashInputSize - 1] = static_cast<std::uint8_t>(ctr);
      input[kHashInputSize - 2] = static_cast<std::uint8_t>(ctr >> 8);
      ++ctr;
      const Digest d = hash32(input, h);
      for (std::size_t j = 0; j < kBlockSize; ++j) block[j] ^= d[j % kDigestSize];
    }
    const double us = elapsed_us(t0);
    g_sink = g_sink ^ block[0];
    if (run >= opts.warmup_runs) samples.push_back(us / static_cast<double>(opts.blocks));
  }
  return median(samples);
}

std::string host_description() {
  std::ostringstream out;
  utsname u{};
  if (uname(&u) == 0) out << u.sysname << ' ' << u.release << ' ' << u.machine;
#if defined(__clang__)
  out << " clang-" << __clang_major__ << '.' << __clang_minor__;
#elif defined(__GNUC__)
  out << " gcc-" << __GNUC__ << '.' << __GNUC_MINOR__;
#endif
  return out.str();
}

std::string csv_header() {
  return "scheme,encrypt_us_per_byte,decrypt_us_per_byte,key_setup_us,blocks,runs,host";
}

std::string csv_row(const BenchRow& row) {
  std::ostringstream out;
  out.precision(6);
  out << row.scheme << ',' << std::fixed << row.encrypt_us_per_byte << ',' << row.decrypt_us_per_byte
      << ',';
  if (row.key_setup_us) {
    out << *row.key_setup_us;
  } else {
    out << "N/A";
  }
  std::string host = row.host;
  std::replace(host.begin(), host.end(), ',', ' ');
  out << ',' << row.blocks << ',' << row.runs << ',' << host;
  return out.str();
}

}  // namespace fogseal::bench
