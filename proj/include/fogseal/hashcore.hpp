#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fogseal/bytes.hpp"
#include "fogseal/keys.hpp"

namespace fogseal {

inline constexpr std::size_t kDigestSize = 32;
inline constexpr std::size_t kHashInputSize = kSecretKeySize + kCounterSize;
inline constexpr std::size_t kBlockSize = 64;

using Digest = std::array<std::uint8_t, kDigestSize>;
using HashInput = std::array<std::uint8_t, kHashInputSize>;

/// Hashes an arbitrary-length message to a 32-byte digest.
using DigestFn = void (*)(ByteView message, std::span<std::uint8_t, kDigestSize> out);

/// A registered 32-byte hash. `state_size` is the working-state size used by
/// memory accounting; it is a reporting figure, not a property of `digest`.
struct HashFn {
  std::string name;
  std::size_t digest_size = kDigestSize;
  std::size_t state_size = 0;
  DigestFn digest = nullptr;
};

inline constexpr std::string_view kDefaultHash = "blake2s-256";

/// Registry lookup. Throws UnknownHash.
const HashFn& find_hash(std::string_view name);

/// Adds or replaces a hash. Throws LengthError if digest_size != 32 or
/// Error on a null digest function. Not thread-safe against concurrent lookups.
void register_hash(HashFn fn);

std::vector<std::string> hash_names();

/// Overrides the reported state size (the default for BLAKE2s is 107 bytes).
void set_hash_state_size(std::string_view name, std::size_t state_size);

/// The 64-byte pad: a digest followed by a copy of itself.
struct Keystream64 {
  std::array<std::uint8_t, kBlockSize> bytes{};

  static Keystream64 from_digest(const Digest& d) noexcept;
  friend bool operator==(const Keystream64&, const Keystream64&) = default;
};

/// Applies `h` to exactly 32 bytes. Throws LengthError otherwise.
Digest hash32(ByteView input, const HashFn& h);

/// SK' (bytes 0-26) followed by the big-endian counter (bytes 27-31).
HashInput key_input(const SecretKey& sk, Counter ctr) noexcept;

/// H(SK' || CTR), the unduplicated half of the keystream. Throws
/// InvalidCounter when ctr == 0.
Digest derive_digest(const SecretKey& sk, Counter ctr, const HashFn& h);

Keystream64 derive_keystream(const SecretKey& sk, Counter ctr, const HashFn& h);

/// Keystreams for a contiguous counter range, stored at 32 bytes per counter.
class PrecomputedKeystream {
 public:
  PrecomputedKeystream() = default;
  PrecomputedKeystream(Counter start, std::vector<Digest> digests)
      : start_(start), digests_(std::move(digests)) {}

  std::size_t size() const noexcept { return digests_.size(); }
  bool empty() const noexcept { return digests_.empty(); }
  Counter start() const noexcept { return start_; }

  /// Element i is the keystream for counter start + i.
  Keystream64 operator[](std::size_t i) const { return Keystream64::from_digest(digests_.at(i)); }
  const std::vector<Digest>& digests() const noexcept { return digests_; }

 private:
  Counter start_{};
  std::vector<Digest> digests_;
};

/// Throws InvalidCounter when start == 0 and CounterOverflow when the range
/// passes 2^40 - 1.
PrecomputedKeystream precompute_keystream(const SecretKey& sk, Counter start, std::size_t n,
                                          const HashFn& h);

/// Contiguous run of digests indexed by counter. Used by sessions to hold
/// precomputed or cached keystream material.
class DigestRun {
 public:
  bool empty() const noexcept { return digests_.empty(); }
  std::size_t size() const noexcept { return digests_.size(); }
  std::uint64_t first() const noexcept { return first_; }
  /// One past the last counter held.
  std::uint64_t end() const noexcept { return first_ + digests_.size(); }

  const Digest* find(std::uint64_t ctr) const noexcept;
  /// Drops every entry with counter <= ctr.
  void discard_through(std::uint64_t ctr);
  /// Appends the digest for counter end(); restarts the run when empty.
  void push(std::uint64_t ctr, const Digest& d);
  void assign(const PrecomputedKeystream& ks);
  void clear() noexcept { digests_.clear(); }

 private:
  std::uint64_t first_ = 1;
  std::deque<Digest> digests_;
};

/// Parsed line of a known-answer vector file.
struct KatVector {
  SecretKey sk;
  Counter ctr;
  Keystream64 keystream;
};

/// Format: `sk_hex ctr_hex keystream_hex` per line, `#` comments.
std::string format_kat(const KatVector& v);
std::vector<KatVector> parse_kat(std::string_view text);

/// Zero key, counters 1..count.
std::vector<KatVector> zero_key_vectors(std::size_t count, const HashFn& h);

}  // namespace fogseal
