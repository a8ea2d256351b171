#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "fogseal/framing.hpp"
#include "fogseal/session.hpp"

namespace fogseal {

/// Per-device state held by a fog node.
struct DeviceRecord {
  DeviceId id;
  Session session;
  std::uint64_t last_accepted = 0;  // event index
  std::uint64_t accepted_count = 0;
  std::uint64_t rejected_count = 0;
};

enum class TupleOutcome { accepted, framing_error, unknown_device, rejected };

std::string_view to_string(TupleOutcome o) noexcept;

struct TupleResult {
  TupleOutcome outcome = TupleOutcome::framing_error;
  DeviceId id;
  Payload payload;
  std::uint64_t skipped = 0;
};

/// Read-only copy of a record.
struct DeviceStatus {
  DeviceId id;
  CounterSnapshot counters;
  CounterMode mode = CounterMode::dual;
  std::size_t resync_window = 0;
  std::uint64_t last_accepted = 0;
  std::uint64_t accepted_count = 0;
  std::uint64_t rejected_count = 0;
};

/// Fog-side table of device sessions keyed by ID.
///
/// Tuples for distinct devices may be handled concurrently; work on one
/// device is serialized by its own lock. Registration, removal and
/// save_state take the table lock exclusively.
class Registry {
 public:
  explicit Registry(std::string hash = std::string(kDefaultHash));

  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;
  Registry(Registry&&) noexcept;
  Registry& operator=(Registry&&) noexcept;
  ~Registry();

  /// Throws DuplicateDevice; the registry is unchanged on error.
  DeviceStatus register_device(DeviceId id, const SecretKey& sk, CounterMode mode,
                               std::size_t window);
  /// Installs an existing session, e.g. one restored from disk.
  DeviceStatus register_session(DeviceId id, Session session);
  bool remove_device(DeviceId id);

  /// Total: never throws, every input maps to one outcome. The event clock
  /// advances once per call.
  TupleResult handle_tuple(ByteView wire) noexcept;

  /// Encrypts with the device session's encryption counter and returns the
  /// 72-byte tuple. Throws UnknownDevice, PayloadTooLong, RekeyRequired.
  std::array<std::uint8_t, kTupleSize> encrypt_for_device(DeviceId id, ByteView payload);

  /// Devices with event_clock - last_accepted > threshold.
  std::vector<DeviceId> stale_devices(std::uint64_t threshold) const;

  std::optional<DeviceStatus> status(DeviceId id) const;
  std::vector<DeviceId> device_ids() const;
  std::size_t size() const;
  std::uint64_t event_clock() const noexcept { return clock_.load(); }

  /// Throws UnknownDevice or ValidationError.
  void set_resync_window(DeviceId id, std::size_t window);

  /// Applies to every session of the registry and to later registrations.
  void set_window_cache(bool on);

  /// `id_hex sk_hex mode window e_ctr d_ctr` per device.
  void save_state(std::ostream& out) const;
  /// Writes a sibling temp file then renames it over `path`.
  void save_state_file(const std::filesystem::path& path) const;

  /// Throws ParseError naming the offending line. Statistics start at zero.
  static Registry load_state(std::istream& in, std::string hash = std::string(kDefaultHash));
  static Registry load_state_file(const std::filesystem::path& path,
                                  std::string hash = std::string(kDefaultHash));

  const std::string& hash_name() const noexcept { return hash_; }

 private:
  struct Slot {
    explicit Slot(DeviceRecord r) : record(std::move(r)) {}
    mutable std::mutex mutex;
    DeviceRecord record;
  };

  static DeviceStatus snapshot(const DeviceRecord& r);

  std::string hash_;
  mutable std::shared_mutex table_mutex_;
  std::map<DeviceId, std::unique_ptr<Slot>> devices_;
  std::atomic<std::uint64_t> clock_{0};
  bool window_cache_ = false;
};

/// Writes `content` to a temp file next to `path` and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace fogseal
