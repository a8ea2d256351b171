#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fogseal::bench {

struct BenchOptions {
  std::size_t blocks = 100'000;  // 64-byte blocks per timed run
  std::size_t runs = 5;          // reported value is the median
  std::size_t warmup_runs = 1;
};

struct BenchRow {
  std::string scheme;
  double encrypt_us_per_byte = 0.0;
  double decrypt_us_per_byte = 0.0;
  std::optional<double> key_setup_us;  // empty for schemes without key setup
  std::size_t blocks = 0;
  std::size_t runs = 0;
  std::string host;
};

/// "proposed", "proposed-precomputed", "aes256-ctr".
const std::vector<std::string>& scheme_names();

/// Throws ValidationError for an unknown scheme.
BenchRow run_scheme(std::string_view scheme, const BenchOptions& opts);

/// Median microseconds for one hash32 call plus a 64-byte XOR, the floor
/// under the per-block cost of the protocol.
double raw_hash_xor_us_per_block(const BenchOptions& opts);

std::string host_description();

std::string csv_header();
std::string csv_row(const BenchRow& row);

}  // namespace fogseal::bench
