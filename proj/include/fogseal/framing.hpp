#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "fogseal/bytes.hpp"
#include "fogseal/hashcore.hpp"
#include "fogseal/keys.hpp"

namespace fogseal {

inline constexpr std::size_t kMaxPayload = 55;
inline constexpr std::size_t kLengthOffset = 55;
inline constexpr std::size_t kCheckOffset = 56;
inline constexpr std::size_t kDeviceIdSize = 8;
inline constexpr std::size_t kTupleSize = kDeviceIdSize + kBlockSize;

using Block = std::array<std::uint8_t, kBlockSize>;

/// Up to 55 payload bytes held inline; no heap allocation.
class Payload {
 public:
  Payload() = default;
  /// Throws PayloadTooLong.
  explicit Payload(ByteView bytes);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  const std::uint8_t* data() const noexcept { return bytes_.data(); }
  ByteView view() const noexcept { return {bytes_.data(), size_}; }
  Bytes to_vector() const { return {bytes_.begin(), bytes_.begin() + size_}; }

  /// All 55 bytes of storage, regardless of the current length.
  std::span<std::uint8_t, kMaxPayload> buffer() noexcept { return bytes_; }

  /// Sets the length (at most 55, else PayloadTooLong) and returns the
  /// writable bytes.
  std::span<std::uint8_t> resize(std::size_t n) {
    if (n > kMaxPayload) throw_too_long(n);
    size_ = n;
    return {bytes_.data(), n};
  }

  friend bool operator==(const Payload& a, const Payload& b) noexcept;

 private:
  [[noreturn]] static void throw_too_long(std::size_t n);

  std::array<std::uint8_t, kMaxPayload> bytes_{};
  std::size_t size_ = 0;
};

/// data (55) || length (1) || check (8).
struct PlainBlock {
  std::array<std::uint8_t, kMaxPayload> data{};
  std::uint8_t length = 0;
  std::array<std::uint8_t, kCheckSize> check{};

  Block to_bytes() const noexcept;
  static PlainBlock from_bytes(const Block& b) noexcept;
  friend bool operator==(const PlainBlock&, const PlainBlock&) = default;
};

struct CipherBlock {
  Block bytes{};
  friend bool operator==(const CipherBlock&, const CipherBlock&) = default;
};

/// 8-byte device identifier, big-endian on the wire.
struct DeviceId {
  std::uint64_t value = 0;

  std::array<std::uint8_t, kDeviceIdSize> to_bytes() const noexcept;
  static DeviceId from_bytes(std::span<const std::uint8_t, kDeviceIdSize> b) noexcept;
  std::string to_hex() const;
  /// Exactly 16 hex digits. Throws fogseal::Error.
  static DeviceId from_hex(std::string_view hex);

  friend constexpr auto operator<=>(const DeviceId&, const DeviceId&) = default;
};

struct Tuple {
  DeviceId id;
  CipherBlock enc;
  friend bool operator==(const Tuple&, const Tuple&) = default;
};

/// Zero padding; check = sk[0..8]. Throws PayloadTooLong.
PlainBlock frame_message(ByteView payload, const SecretKey& sk);

/// nullopt on a check mismatch or a length field above 55.
std::optional<Payload> deframe_message(const PlainBlock& block, const SecretKey& sk) noexcept;

Block xor_block(const Block& a, const Keystream64& ks) noexcept;

std::array<std::uint8_t, kTupleSize> encode_tuple(DeviceId id, const CipherBlock& enc) noexcept;

/// Throws FramingError unless `wire` is exactly 72 bytes.
Tuple decode_tuple(ByteView wire);

}  // namespace fogseal
