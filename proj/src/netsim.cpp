#include "fogseal/netsim.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <json.hpp>
#include <sstream>

#include "fogseal/errors.hpp"
#include "fogseal/registry.hpp"
#include "fogseal/rng.hpp"

namespace fogseal::netsim {

using Kind = AdversaryAction::Kind;

std::string_view to_string(Kind k) noexcept {
  switch (k) {
    case Kind::pass: return "pass";
    case Kind::drop: return "drop";
    case Kind::bitflip: return "bitflip";
    case Kind::replay: return "replay";
    case Kind::inject: return "inject";
    case Kind::reorder: return "reorder";
  }
  return "unknown";
}

namespace {

constexpr std::size_t kMaxInject = 1024;
constexpr std::size_t kMaxDevices = 4096;

std::string at(std::size_t i) { return "schedule[" + std::to_string(i) + "]: "; }

}  // namespace

void validate(const Scenario& sc) {
  const auto& t = sc.topology;
  if (t.devices == 0 || t.devices > kMaxDevices) {
    throw ValidationError("topology.devices must be in 1..4096");
  }
  if (t.window > Session::kMaxResyncWindow) {
    throw ValidationError("topology.window exceeds 5,000,000");
  }
  if (sc.payload.min_len > sc.payload.max_len || sc.payload.max_len > kMaxPayload) {
    throw ValidationError("payload lengths must satisfy min_len <= max_len <= 55");
  }
  if (sc.schedule.size() != sc.message_count) {
    throw ValidationError("schedule has " + std::to_string(sc.schedule.size()) +
                          " actions for " + std::to_string(sc.message_count) + " messages");
  }
  for (std::size_t i = 0; i < sc.schedule.size(); ++i) {
    const auto& a = sc.schedule[i];
    switch (a.kind) {
      case Kind::bitflip:
        if (a.byte >= kTupleSize || a.bit >= 8) throw ValidationError(at(i) + "bitflip out of range");
        break;
      case Kind::replay:
        if (a.of > i) throw ValidationError(at(i) + "replay of a message not yet transmitted");
        break;
      case Kind::inject:
        if (a.bytes.size() > kMaxInject) throw ValidationError(at(i) + "inject longer than 1024 bytes");
        break;
      case Kind::reorder:
        if (a.displacement == 0) throw ValidationError(at(i) + "reorder displacement must be >= 1");
        break;
      case Kind::pass:
      case Kind::drop:
        break;
    }
  }
}

namespace {

struct Harness {
  explicit Harness(const Scenario& sc)
      : sc(sc), rng(sc.seed), fog(std::string(kDefaultHash)) {
    const auto& t = sc.topology;
    for (std::size_t d = 0; d < t.devices; ++d) {
      SecretKey::Array key{};
      rng.fill(key);
      const DeviceId id{d + 1};
      ids.push_back(id);
      senders.emplace_back(SecretKey(key), SessionOptions{t.mode, t.window});
      fog.register_device(id, SecretKey(key), t.mode, t.window);
      desynced.push_back(false);
    }
    report.name = sc.name;
    report.seed = sc.seed;
    report.window = t.window;
    report.forgery_bound_per_attempt = static_cast<double>(t.window + 1) / std::ldexp(1.0, 64);
    report.window_keystream_bytes = (static_cast<std::uint64_t>(t.window) + 1) * kBlockSize;
  }

  Bytes random_payload() {
    const auto span = sc.payload.max_len - sc.payload.min_len + 1;
    Bytes p(sc.payload.min_len + rng.below(span));
    rng.fill(p);
    return p;
  }

  void deliver(ByteView wire) {
    ++report.presented;
    const TupleResult r = fog.handle_tuple(wire);
    switch (r.outcome) {
      case TupleOutcome::accepted: {
        // The harness knows which plaintext each (device, counter) carried.
        const auto ctr = fog.status(r.id)->counters.d_ctr;
        const auto it = truth.find({r.id.value, ctr});
        if (it != truth.end() && ByteView(it->second).size() == r.payload.size() &&
            std::equal(it->second.begin(), it->second.end(), r.payload.data())) {
          ++report.delivered;
        } else {
          ++report.undetected_modifications;
        }
        if (r.skipped > 0) {
          ++report.resync_recoveries;
          report.max_skipped = std::max(report.max_skipped, r.skipped);
        }
        break;
      }
      case TupleOutcome::rejected:
        ++report.rejected;
        ++report.rejected_integrity;
        break;
      case TupleOutcome::framing_error:
        ++report.rejected;
        ++report.rejected_framing;
        break;
      case TupleOutcome::unknown_device:
        ++report.rejected;
        ++report.rejected_unknown_device;
        break;
    }
  }

  void track_sync() {
    for (std::size_t d = 0; d < ids.size(); ++d) {
      const auto sent = senders[d].peek_counters().e_ctr;
      const auto received = fog.status(ids[d])->counters.d_ctr;
      const bool behind = received < sent;
      if (behind && !desynced[d]) ++report.desync_events;
      desynced[d] = behind;
    }
  }

  void release_held(std::size_t step) {
    for (auto it = held.begin(); it != held.end();) {
      if (it->first <= step) {
        deliver(it->second);
        it = held.erase(it);
      } else {
        ++it;
      }
    }
  }

  ScenarioReport run() {
    for (std::size_t i = 0; i < sc.message_count; ++i) {
      const std::size_t d = i % ids.size();
      const Bytes payload = random_payload();
      const CipherBlock enc = senders[d].encrypt_next(payload);
      truth[{ids[d].value, senders[d].peek_counters().e_ctr}] = payload;
      const auto wire = encode_tuple(ids[d], enc);
      sent.emplace_back(wire.begin(), wire.end());
      ++report.messages_sent;
      ++report.adversary_observed_tuples;

      const AdversaryAction& a = sc.schedule[i];
      switch (a.kind) {
        case Kind::pass:
          deliver(wire);
          break;
        case Kind::drop:
          ++report.dropped;
          break;
        case Kind::bitflip: {
          Bytes modified(wire.begin(), wire.end());
          modified[a.byte] ^= static_cast<std::uint8_t>(1u << a.bit);
          deliver(modified);
          break;
        }
        case Kind::replay:
          deliver(wire);
          ++report.replays_presented;
          deliver(sent[a.of]);
          break;
        case Kind::inject:
          deliver(wire);
          ++report.injections_presented;
          deliver(a.bytes);
          break;
        case Kind::reorder:
          held.emplace_back(i + a.displacement, sent.back());
          break;
      }
      release_held(i);
      track_sync();
    }
    release_held(static_cast<std::size_t>(-1));
    track_sync();

    for (DeviceId id : fog.stale_devices(sc.topology.stale_threshold)) {
      report.stale_devices.push_back(id.to_hex());
    }
    for (DeviceId id : ids) {
      const auto hex = id.to_hex();
      const bool stale = std::find(report.stale_devices.begin(), report.stale_devices.end(), hex) !=
                         report.stale_devices.end();
      report.staleness.emplace_back(hex, stale);
    }
    return report;
  }

  const Scenario& sc;
  Rng rng;
  Registry fog;
  std::vector<DeviceId> ids;
  std::vector<Session> senders;
  std::vector<bool> desynced;
  std::map<std::pair<std::uint64_t, std::uint64_t>, Bytes> truth;
  std::vector<Bytes> sent;
  std::vector<std::pair<std::size_t, Bytes>> held;  // release step, wire
  ScenarioReport report;
};

}  // namespace

ScenarioReport run_scenario(const Scenario& sc) {
  validate(sc);
  Harness h(sc);
  return h.run();
}

// --- JSON ---------------------------------------------------------------

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

Kind parse_kind(const std::string& s) {
  if (s == "pass") return Kind::pass;
  if (s == "drop") return Kind::drop;
  if (s == "bitflip") return Kind::bitflip;
  if (s == "replay") return Kind::replay;
  if (s == "inject") return Kind::inject;
  if (s == "reorder") return Kind::reorder;
  throw ValidationError("unknown adversary action '" + s + "'");
}

// `self` is the index the action is attached to; a replay without `of`
// replays that same message.
AdversaryAction parse_action(const json& j, std::size_t self) {
  AdversaryAction a;
  if (j.is_string()) {
    a.kind = parse_kind(j.get<std::string>());
    a.of = self;
    return a;
  }
  if (!j.is_object() || !j.contains("kind")) {
    throw ValidationError("action must be a kind string or an object with 'kind'");
  }
  a.kind = parse_kind(j.at("kind").get<std::string>());
  a.byte = j.value("byte", std::size_t{0});
  a.bit = j.value("bit", 0u);
  a.of = j.value("of", self);
  a.displacement = j.value("displacement", std::size_t{1});
  if (j.contains("hex")) a.bytes = from_hex(j.at("hex").get<std::string>());
  return a;
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object()) throw ValidationError("scenario must be a JSON object");
    if (j.contains("rng") && j.at("rng").get<std::string>() != Rng::kName) {
      throw ValidationError("rng must be 'mt19937_64'");
    }
    Scenario sc;
    sc.name = j.value("name", std::string("scenario"));
    sc.seed = j.at("seed").get<std::uint64_t>();
    sc.message_count = j.at("message_count").get<std::size_t>();
    if (j.contains("payload")) {
      const auto& p = j.at("payload");
      sc.payload.min_len = p.value("min_len", std::size_t{0});
      sc.payload.max_len = p.value("max_len", kMaxPayload);
    }
    if (j.contains("topology")) {
      const auto& t = j.at("topology");
      sc.topology.devices = t.value("devices", std::size_t{1});
      sc.topology.mode = parse_counter_mode(t.value("mode", std::string("dual")));
      sc.topology.window = t.value("window", std::size_t{1024});
      sc.topology.stale_threshold = t.value("stale_threshold", std::uint64_t{16});
    }
    const auto& s = j.at("schedule");
    if (s.is_array()) {
      for (std::size_t i = 0; i < s.size(); ++i) sc.schedule.push_back(parse_action(s[i], i));
    } else if (s.is_object()) {
      const json def = s.value("default", json("pass"));
      for (std::size_t i = 0; i < sc.message_count; ++i) sc.schedule.push_back(parse_action(def, i));
      if (s.contains("at")) {
        for (const auto& [key, action] : s.at("at").items()) {
          std::size_t idx = 0;
          try {
            idx = std::stoul(key);
          } catch (const std::exception&) {
            throw ValidationError("schedule.at key '" + key + "' is not an index");
          }
          if (idx >= sc.message_count) throw ValidationError("schedule.at index " + key + " out of range");
          sc.schedule[idx] = parse_action(action, idx);
        }
      }
    } else {
      throw ValidationError("schedule must be an array or an object");
    }
    validate(sc);
    return sc;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scenario field error: ") + e.what());
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }
}

std::string report_to_json(const ScenarioReport& r) {
  ojson j;
  j["name"] = r.name;
  j["seed"] = r.seed;
  j["messages_sent"] = r.messages_sent;
  j["presented"] = r.presented;
  j["delivered"] = r.delivered;
  j["rejected"] = r.rejected;
  j["rejected_integrity"] = r.rejected_integrity;
  j["rejected_framing"] = r.rejected_framing;
  j["rejected_unknown_device"] = r.rejected_unknown_device;
  j["undetected_modifications"] = r.undetected_modifications;
  j["dropped"] = r.dropped;
  j["replays_presented"] = r.replays_presented;
  j["injections_presented"] = r.injections_presented;
  j["desync_events"] = r.desync_events;
  j["resync_recoveries"] = r.resync_recoveries;
  j["max_skipped"] = r.max_skipped;
  j["adversary_observed_tuples"] = r.adversary_observed_tuples;
  j["window"] = r.window;
  j["forgery_bound_per_attempt"] = r.forgery_bound_per_attempt;
  j["window_keystream_bytes"] = r.window_keystream_bytes;
  j["stale_devices"] = r.stale_devices;
  ojson flags = ojson::object();
  for (const auto& [id, stale] : r.staleness) flags[id] = stale;
  j["staleness"] = flags;
  return j.dump(2) + "\n";
}

std::string report_table(const ScenarioReport& r) {
  std::ostringstream out;
  auto row = [&out](std::string_view label, auto value) {
    out << "  " << std::left << std::setw(28) << label << value << '\n';
  };
  out << "scenario " << r.name << " (seed " << r.seed << ")\n";
  row("messages sent", r.messages_sent);
  row("presented to fog", r.presented);
  row("delivered", r.delivered);
  row("rejected", r.rejected);
  row("  integrity", r.rejected_integrity);
  row("  framing", r.rejected_framing);
  row("  unknown device", r.rejected_unknown_device);
  row("undetected modifications", r.undetected_modifications);
  row("dropped", r.dropped);
  row("replays presented", r.replays_presented);
  row("injections presented", r.injections_presented);
  row("desync events", r.desync_events);
  row("resync recoveries", r.resync_recoveries);
  row("max skipped", r.max_skipped);
  row("resync window", r.window);
  std::ostringstream bound;
  bound << std::scientific << std::setprecision(3) << r.forgery_bound_per_attempt;
  row("forgery bound / attempt", bound.str());
  row("window keystream bytes", r.window_keystream_bytes);
  std::string stale;
  for (const auto& id : r.stale_devices) stale += (stale.empty() ? "" : ",") + id;
  row("stale devices", stale.empty() ? std::string("-") : stale);
  return out.str();
}

// --- census and forgery -------------------------------------------------

BitflipCensus bitflip_census(const SecretKey& sk, ByteView payload, Counter ctr,
                             std::string_view hash) {
  if (ctr.value() == 0) throw InvalidCounter("census counter must be >= 1");
  const SessionOptions opts{CounterMode::dual, 0, std::string(hash)};
  Session sender = Session::restore(sk, opts, ctr.value() - 1, 0);
  const CipherBlock original = sender.encrypt_next(payload);

  BitflipCensus census;
  for (std::size_t pos = 0; pos < kBlockSize * 8; ++pos) {
    CipherBlock flipped = original;
    flipped.bytes[pos / 8] ^= static_cast<std::uint8_t>(1u << (pos % 8));
    Session receiver = Session::restore(sk, opts, 0, ctr.value() - 1);
    const bool detected = !receiver.decrypt_next(flipped).has_value();
    census.detected[pos] = detected;
    if (!detected) continue;
    const std::size_t byte = pos / 8;
    if (byte >= kCheckOffset) {
      ++census.check_region_detected;
    } else if (byte == kLengthOffset) {
      ++census.length_byte_detected;
    } else {
      ++census.data_region_detected;
    }
  }
  return census;
}

std::uint64_t forgery_trial(const SecretKey& sk, std::uint64_t trials, std::size_t window,
                            std::uint64_t seed, std::string_view hash) {
  Session receiver(sk, SessionOptions{CounterMode::dual, window, std::string(hash)});
  receiver.set_window_cache(true);
  Rng rng(seed);
  std::uint64_t passes = 0;
  CipherBlock block;
  for (std::uint64_t i = 0; i < trials; ++i) {
    rng.fill(block.bytes);
    if (receiver.decrypt_with_resync(block)) ++passes;
  }
  return passes;
}

double expected_forgeries(std::uint64_t trials, std::size_t window) noexcept {
  return static_cast<double>(trials) * static_cast<double>(window + 1) / std::ldexp(1.0, 64);
}

}  // namespace fogseal::netsim
