#include "fogseal/bytes.hpp"

#include "fogseal/errors.hpp"
#include "fogseal/keys.hpp"

namespace fogseal {

namespace {

int nibble(char c) noexcept {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw LengthError("hex string has odd length");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error("invalid hex character");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

bool try_from_hex(std::string_view hex, std::span<std::uint8_t> out) noexcept {
  if (hex.size() != out.size() * 2) return false;
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return false;
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return true;
}

SecretKey::SecretKey(ByteView bytes) {
  if (bytes.size() != kSecretKeySize) {
    throw LengthError("secret key must be 27 bytes, got " + std::to_string(bytes.size()));
  }
  std::copy(bytes.begin(), bytes.end(), bytes_.begin());
}

Counter::Counter(std::uint64_t value) : value_(value) {
  if (value > kMax) throw CounterOverflow("counter exceeds 2^40 - 1");
}

std::array<std::uint8_t, kCounterSize> Counter::to_bytes() const noexcept {
  std::array<std::uint8_t, kCounterSize> out{};
  for (std::size_t i = 0; i < kCounterSize; ++i) {
    out[kCounterSize - 1 - i] = static_cast<std::uint8_t>(value_ >> (8 * i));
  }
  return out;
}

Counter Counter::from_bytes(std::span<const std::uint8_t, kCounterSize> bytes) noexcept {
  Counter c;
  for (std::uint8_t b : bytes) c.value_ = (c.value_ << 8) | b;
  return c;
}

}  // namespace fogseal
