#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fogseal {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Lower-case hex, two characters per byte.
std::string to_hex(ByteView bytes);

/// Accepts upper or lower case. Throws fogseal::LengthError on odd length and
/// fogseal::Error on a non-hex character.
Bytes from_hex(std::string_view hex);

/// Decodes exactly `out.size()` bytes; returns false instead of throwing.
bool try_from_hex(std::string_view hex, std::span<std::uint8_t> out) noexcept;

inline ByteView as_bytes(std::string_view s) noexcept {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace fogseal
