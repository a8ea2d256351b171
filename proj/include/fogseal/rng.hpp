#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace fogseal {

/// Seeded mt19937_64 with portable derived draws: rejection-sampled
/// below() and little-endian fill(), no std distributions. Same stream on
/// every platform.
class Rng {
 public:
  static constexpr const char* kName = "mt19937_64";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % bound;
    }
  }

  /// Little-endian bytes of successive draws.
  void fill(std::span<std::uint8_t> out) {
    std::size_t i = 0;
    while (i < out.size()) {
      std::uint64_t x = engine_();
      for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
        out[i] = static_cast<std::uint8_t>(x);
        x >>= 8;
      }
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fogseal
