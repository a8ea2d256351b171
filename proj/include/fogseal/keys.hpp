#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>

#include "fogseal/bytes.hpp"

namespace fogseal {

inline constexpr std::size_t kSecretKeySize = 27;
inline constexpr std::size_t kCounterSize = 5;
inline constexpr std::size_t kCheckSize = 8;

/// The pre-shared 27-byte secret. Never serialized onto the wire.
class SecretKey {
 public:
  using Array = std::array<std::uint8_t, kSecretKeySize>;

  SecretKey() = default;  // all zero
  explicit SecretKey(const Array& bytes) noexcept : bytes_(bytes) {}
  /// Throws LengthError unless exactly 27 bytes.
  explicit SecretKey(ByteView bytes);

  const Array& bytes() const noexcept { return bytes_; }

  /// First 8 bytes; doubles as the integrity-check constant.
  std::span<const std::uint8_t, kCheckSize> check_value() const noexcept {
    return std::span<const std::uint8_t, kCheckSize>(bytes_.data(), kCheckSize);
  }

  friend bool operator==(const SecretKey&, const SecretKey&) = default;

 private:
  Array bytes_{};
};

/// 40-bit counter value. Zero is the fresh-session value (counters hold the
/// last used value); keystream derivation rejects it.
class Counter {
 public:
  static constexpr std::uint64_t kMax = (std::uint64_t{1} << 40) - 1;

  constexpr Counter() = default;
  /// Throws CounterOverflow when value > 2^40 - 1.
  explicit Counter(std::uint64_t value);

  constexpr std::uint64_t value() const noexcept { return value_; }

  /// Big-endian, most significant byte first.
  std::array<std::uint8_t, kCounterSize> to_bytes() const noexcept;
  static Counter from_bytes(std::span<const std::uint8_t, kCounterSize> bytes) noexcept;

  friend constexpr auto operator<=>(const Counter&, const Counter&) = default;

 private:
  std::uint64_t value_ = 0;
};

}  // namespace fogseal
