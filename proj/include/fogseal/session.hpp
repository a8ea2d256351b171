#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "fogseal/framing.hpp"
#include "fogseal/hashcore.hpp"
#include "fogseal/keys.hpp"

namespace fogseal {

enum class CounterMode { single, dual };

std::string_view to_string(CounterMode m) noexcept;
/// Accepts "single" or "dual". Throws ValidationError.
CounterMode parse_counter_mode(std::string_view s);

struct SessionOptions {
  CounterMode mode = CounterMode::dual;
  std::size_t resync_window = 1024;
  std::string hash{kDefaultHash};
};

/// Last-used counter values; a fresh session reports (0, 0).
struct CounterSnapshot {
  std::uint64_t e_ctr = 0;
  std::uint64_t d_ctr = 0;
  friend bool operator==(const CounterSnapshot&, const CounterSnapshot&) = default;
};

struct ResyncResult {
  Payload payload;
  std::uint64_t skipped = 0;
};

/// Per-peer protocol state. Counters hold the last used value and are
/// incremented before use, so the first message of a session uses CTR = 1.
///
/// In dual mode the encryption and decryption counters advance
/// independently; in single mode both operations share one counter.
/// A rejected decryption never changes either counter.
///
/// Not internally synchronized: callers serialize access to one session.
class Session {
 public:
  static constexpr std::size_t kMaxResyncWindow = 5'000'000;

  /// Throws ValidationError for a window above 5,000,000 and UnknownHash.
  explicit Session(const SecretKey& sk, SessionOptions opts = {});

  /// Rebuilds a session from persisted last-used counters. In single mode
  /// the two values must agree.
  static Session restore(const SecretKey& sk, SessionOptions opts, std::uint64_t e_ctr,
                         std::uint64_t d_ctr);

  /// Throws PayloadTooLong or RekeyRequired; the session is untouched on error.
  CipherBlock encrypt_next(ByteView payload);

  /// Tries exactly d_ctr + 1.
  std::optional<Payload> decrypt_next(const CipherBlock& enc);

  /// Tries d_ctr + 1 ... d_ctr + 1 + W in ascending order and commits the
  /// first counter whose block passes the integrity check.
  std::optional<ResyncResult> decrypt_with_resync(const CipherBlock& enc);

  CounterSnapshot peek_counters() const noexcept;

  /// Derives keystream for the next `n` encryption counters ahead of time.
  void precompute_encrypt(std::size_t n);
  /// Same for the next `n` decryption counters.
  void precompute_decrypt(std::size_t n);

  /// Keeps the digests of the resync window across rejected attempts: one
  /// hash per new counter rather than per candidate per block. Holds at most
  /// W + 1 digests. Off by default.
  void set_window_cache(bool on);
  bool window_cache() const noexcept { return window_cache_; }

  const SecretKey& key() const noexcept { return sk_; }
  CounterMode mode() const noexcept { return opts_.mode; }
  std::size_t resync_window() const noexcept { return opts_.resync_window; }
  void set_resync_window(std::size_t w);
  const HashFn& hash() const noexcept { return *hash_; }
  const SessionOptions& options() const noexcept { return opts_; }

 private:
  std::size_t enc_index() const noexcept { return 0; }
  std::size_t dec_index() const noexcept { return opts_.mode == CounterMode::dual ? 1 : 0; }

  Digest digest_for(std::size_t run, std::uint64_t ctr, bool cache);
  std::optional<Payload> try_candidate(const CipherBlock& enc, const Digest& d) const noexcept;
  void commit(std::size_t run, std::uint64_t ctr);

  SecretKey sk_;
  SessionOptions opts_;
  const HashFn* hash_;
  std::array<std::uint64_t, 2> counters_{0, 0};
  std::array<DigestRun, 2> runs_;
  bool window_cache_ = false;
};

struct MemoryParams {
  std::size_t hash_state = 107;
  std::size_t sk_ctr = kHashInputSize;
  bool dual = false;
};

struct MemoryFootprint {
  std::size_t global_bytes = 0;
  std::size_t peak_local_bytes = 0;
  std::size_t total_bytes = 0;
  friend bool operator==(const MemoryFootprint&, const MemoryFootprint&) = default;
};

/// size(H) + 2*size(SK||CTR), plus size(CTR) in dual mode.
constexpr MemoryFootprint memory_footprint(const MemoryParams& p) noexcept {
  const std::size_t extra = p.dual ? kCounterSize : 0;
  MemoryFootprint f;
  f.global_bytes = p.hash_state + p.sk_ctr + extra;
  f.peak_local_bytes = p.sk_ctr;
  f.total_bytes = f.global_bytes + f.peak_local_bytes;
  return f;
}

}  // namespace fogseal
