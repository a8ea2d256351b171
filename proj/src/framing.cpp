#include "fogseal/framing.hpp"

#include <algorithm>
#include <cstring>

#include "fogseal/errors.hpp"

namespace fogseal {

void Payload::throw_too_long(std::size_t n) {
  throw PayloadTooLong("payload of " + std::to_string(n) + " bytes exceeds 55");
}

Payload::Payload(ByteView bytes) {
  if (bytes.size() > kMaxPayload) throw_too_long(bytes.size());
  std::copy(bytes.begin(), bytes.end(), bytes_.begin());
  size_ = bytes.size();
}

bool operator==(const Payload& a, const Payload& b) noexcept {
  return a.size_ == b.size_ && std::equal(a.bytes_.begin(), a.bytes_.begin() + a.size_, b.bytes_.begin());
}

Block PlainBlock::to_bytes() const noexcept {
  Block out;
  std::copy(data.begin(), data.end(), out.begin());
  out[kLengthOffset] = length;
  std::copy(check.begin(), check.end(), out.begin() + kCheckOffset);
  return out;
}

PlainBlock PlainBlock::from_bytes(const Block& b) noexcept {
  PlainBlock p;
  std::copy(b.begin(), b.begin() + kMaxPayload, p.data.begin());
  p.length = b[kLengthOffset];
  std::copy(b.begin() + kCheckOffset, b.end(), p.check.begin());
  return p;
}

std::array<std::uint8_t, kDeviceIdSize> DeviceId::to_bytes() const noexcept {
  std::array<std::uint8_t, kDeviceIdSize> out{};
  for (std::size_t i = 0; i < kDeviceIdSize; ++i) {
    out[kDeviceIdSize - 1 - i] = static_cast<std::uint8_t>(value >> (8 * i));
  }
  return out;
}

DeviceId DeviceId::from_bytes(std::span<const std::uint8_t, kDeviceIdSize> b) noexcept {
  DeviceId id;
  for (std::uint8_t byte : b) id.value = (id.value << 8) | byte;
  return id;
}

std::string DeviceId::to_hex() const { return fogseal::to_hex(to_bytes()); }

DeviceId DeviceId::from_hex(std::string_view hex) {
  std::array<std::uint8_t, kDeviceIdSize> b{};
  if (!try_from_hex(hex, b)) throw ValidationError("device id must be 16 hex digits: " + std::string(hex));
  return from_bytes(b);
}

PlainBlock frame_message(ByteView payload, const SecretKey& sk) {
  if (payload.size() > kMaxPayload) {
    throw PayloadTooLong("payload of " + std::to_string(payload.size()) + " bytes exceeds 55");
  }
  PlainBlock p;
  std::copy(payload.begin(), payload.end(), p.data.begin());
  p.length = static_cast<std::uint8_t>(payload.size());
  const auto check = sk.check_value();
  std::copy(check.begin(), check.end(), p.check.begin());
  return p;
}

std::optional<Payload> deframe_message(const PlainBlock& block, const SecretKey& sk) noexcept {
  const auto check = sk.check_value();
  if (!std::equal(check.begin(), check.end(), block.check.begin())) return std::nullopt;
  if (block.length > kMaxPayload) return std::nullopt;
  return Payload(ByteView(block.data.data(), block.length));
}

Block xor_block(const Block& a, const Keystream64& ks) noexcept {
  Block out;
  for (std::size_t i = 0; i < kBlockSize; ++i) out[i] = a[i] ^ ks.bytes[i];
  return out;
}

std::array<std::uint8_t, kTupleSize> encode_tuple(DeviceId id, const CipherBlock& enc) noexcept {
  std::array<std::uint8_t, kTupleSize> out{};
  const auto idb = id.to_bytes();
  std::copy(idb.begin(), idb.end(), out.begin());
  std::copy(enc.bytes.begin(), enc.bytes.end(), out.begin() + kDeviceIdSize);
  return out;
}

Tuple decode_tuple(ByteView wire) {
  if (wire.size() != kTupleSize) {
    throw FramingError("tuple must be 72 bytes, got " + std::to_string(wire.size()));
  }
  Tuple t;
  t.id = DeviceId::from_bytes(wire.first<kDeviceIdSize>());
  std::copy(wire.begin() + kDeviceIdSize, wire.end(), t.enc.bytes.begin());
  return t;
}

}  // namespace fogseal
