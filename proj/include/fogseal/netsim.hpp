#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fogseal/bytes.hpp"
#include "fogseal/framing.hpp"
#include "fogseal/session.hpp"

namespace fogseal::netsim {

/// What the adversary does with one transmitted tuple.
struct AdversaryAction {
  enum class Kind { pass, drop, bitflip, replay, inject, reorder };

  Kind kind = Kind::pass;
  std::size_t byte = 0;          // bitflip: offset into the 72-byte wire tuple
  unsigned bit = 0;              // bitflip: 0 = least significant
  std::size_t of = 0;            // replay: index of an already transmitted message
  Bytes bytes;                   // inject: raw wire bytes sent after the genuine tuple
  std::size_t displacement = 1;  // reorder: delivered after this many later steps

  static AdversaryAction of_kind(Kind k) {
    AdversaryAction a;
    a.kind = k;
    return a;
  }
  static AdversaryAction pass() { return {}; }
  static AdversaryAction drop() { return of_kind(Kind::drop); }
  static AdversaryAction bitflip(std::size_t byte, unsigned bit) {
    AdversaryAction a = of_kind(Kind::bitflip);
    a.byte = byte;
    a.bit = bit;
    return a;
  }
  static AdversaryAction replay(std::size_t of) {
    AdversaryAction a = of_kind(Kind::replay);
    a.of = of;
    return a;
  }
  static AdversaryAction inject(Bytes wire) {
    AdversaryAction a = of_kind(Kind::inject);
    a.bytes = std::move(wire);
    return a;
  }
  static AdversaryAction reorder(std::size_t displacement) {
    AdversaryAction a = of_kind(Kind::reorder);
    a.displacement = displacement;
    return a;
  }
};

std::string_view to_string(AdversaryAction::Kind k) noexcept;

struct PayloadSpec {
  std::size_t min_len = 0;
  std::size_t max_len = kMaxPayload;
};

/// Devices 1..n talk to one fog node. Message i is sent by device i mod n.
struct Topology {
  std::size_t devices = 1;
  CounterMode mode = CounterMode::dual;
  std::size_t window = 1024;
  std::uint64_t stale_threshold = 16;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t message_count = 0;
  PayloadSpec payload;
  std::vector<AdversaryAction> schedule;  // one per message
  Topology topology;
};

struct ScenarioReport {
  std::string name;
  std::uint64_t seed = 0;
  std::uint64_t messages_sent = 0;
  std::uint64_t presented = 0;  // tuples handed to the fog node
  std::uint64_t delivered = 0;  // accepted with the original payload
  std::uint64_t rejected = 0;
  std::uint64_t rejected_integrity = 0;
  std::uint64_t rejected_framing = 0;
  std::uint64_t rejected_unknown_device = 0;
  std::uint64_t undetected_modifications = 0;  // accepted with a wrong payload
  std::uint64_t dropped = 0;
  std::uint64_t replays_presented = 0;
  std::uint64_t injections_presented = 0;
  std::uint64_t desync_events = 0;
  std::uint64_t resync_recoveries = 0;
  std::uint64_t max_skipped = 0;
  std::uint64_t adversary_observed_tuples = 0;
  std::size_t window = 0;
  double forgery_bound_per_attempt = 0.0;  // (W + 1) / 2^64
  std::uint64_t window_keystream_bytes = 0;  // (W + 1) * 64
  std::vector<std::string> stale_devices;
  std::vector<std::pair<std::string, bool>> staleness;  // every device, by id

  friend bool operator==(const ScenarioReport&, const ScenarioReport&) = default;
};

/// Throws ValidationError describing the first problem found.
void validate(const Scenario& sc);

/// Deterministic for a given scenario. Validates first; nothing runs on a
/// malformed scenario.
ScenarioReport run_scenario(const Scenario& sc);

/// JSON scenario file. `schedule` is either an array with one action per
/// message or {"default": action, "at": {"<index>": action, ...}}. An action
/// is a kind string or an object with a `kind` field. Throws ValidationError.
Scenario parse_scenario(std::string_view json_text);

std::string report_to_json(const ScenarioReport& r);
std::string report_table(const ScenarioReport& r);

/// One entry per ciphertext bit: byte i bit b is entry 8*i + b.
struct BitflipCensus {
  std::array<bool, kBlockSize * 8> detected{};
  std::size_t check_region_detected = 0;    // bytes 56-63, of 64
  std::size_t data_region_detected = 0;     // bytes 0-54, of 440
  std::size_t length_byte_detected = 0;     // byte 55, of 8
};

/// Encrypts `payload` at counter `ctr`, then for every bit flips it and
/// offers the block to a freshly synchronized receiver.
BitflipCensus bitflip_census(const SecretKey& sk, ByteView payload, Counter ctr,
                             std::string_view hash = kDefaultHash);

/// Offers `trials` uniformly random 64-byte blocks to one receiver with
/// resync window `window`; returns how many pass the integrity check.
std::uint64_t forgery_trial(const SecretKey& sk, std::uint64_t trials, std::size_t window,
                            std::uint64_t seed = 1, std::string_view hash = kDefaultHash);

/// trials * (window + 1) / 2^64.
double expected_forgeries(std::uint64_t trials, std::size_t window) noexcept;

}  // namespace fogseal::netsim
