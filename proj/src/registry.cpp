#include "fogseal/registry.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "fogseal/errors.hpp"

namespace fogseal {

std::string_view to_string(TupleOutcome o) noexcept {
  switch (o) {
    case TupleOutcome::accepted: return "accepted";
    case TupleOutcome::framing_error: return "framing-error";
    case TupleOutcome::unknown_device: return "unknown-device";
    case TupleOutcome::rejected: return "rejected";
  }
  return "unknown";
}

Registry::Registry(std::string hash) : hash_(std::move(hash)) { find_hash(hash_); }

Registry::Registry(Registry&& other) noexcept {
  std::unique_lock lock(other.table_mutex_);
  hash_ = std::move(other.hash_);
  devices_ = std::move(other.devices_);
  clock_.store(other.clock_.load());
  window_cache_ = other.window_cache_;
}

Registry& Registry::operator=(Registry&& other) noexcept {
  if (this != &other) {
    std::scoped_lock lock(table_mutex_, other.table_mutex_);
    hash_ = std::move(other.hash_);
    devices_ = std::move(other.devices_);
    clock_.store(other.clock_.load());
    window_cache_ = other.window_cache_;
  }
  return *this;
}

Registry::~Registry() = default;

DeviceStatus Registry::snapshot(const DeviceRecord& r) {
  return {r.id,
          r.session.peek_counters(),
          r.session.mode(),
          r.session.resync_window(),
          r.last_accepted,
          r.accepted_count,
          r.rejected_count};
}

DeviceStatus Registry::register_device(DeviceId id, const SecretKey& sk, CounterMode mode,
                                       std::size_t window) {
  return register_session(id, Session(sk, SessionOptions{mode, window, hash_}));
}

DeviceStatus Registry::register_session(DeviceId id, Session session) {
  std::unique_lock lock(table_mutex_);
  if (devices_.contains(id)) throw DuplicateDevice("device already registered: " + id.to_hex());
  session.set_window_cache(window_cache_);
  auto slot = std::make_unique<Slot>(DeviceRecord{id, std::move(session), clock_.load(), 0, 0});
  auto status = snapshot(slot->record);
  devices_.emplace(id, std::move(slot));
  return status;
}

bool Registry::remove_device(DeviceId id) {
  std::unique_lock lock(table_mutex_);
  return devices_.erase(id) > 0;
}

TupleResult Registry::handle_tuple(ByteView wire) noexcept {
  const std::uint64_t event = ++clock_;
  TupleResult result;
  if (wire.size() != kTupleSize) {
    result.outcome = TupleOutcome::framing_error;
    return result;
  }
  const Tuple tuple = decode_tuple(wire);
  result.id = tuple.id;

  std::shared_lock table(table_mutex_);
  auto it = devices_.find(tuple.id);
  if (it == devices_.end()) {
    result.outcome = TupleOutcome::unknown_device;
    return result;
  }
  Slot& slot = *it->second;
  std::lock_guard device(slot.mutex);
  DeviceRecord& rec = slot.record;
  std::optional<ResyncResult> r;
  try {
    r = rec.session.decrypt_with_resync(tuple.enc);
  } catch (...) {
    r.reset();
  }
  if (!r) {
    ++rec.rejected_count;
    result.outcome = TupleOutcome::rejected;
    return result;
  }
  rec.last_accepted = event;
  ++rec.accepted_count;
  result.outcome = TupleOutcome::accepted;
  result.payload = r->payload;
  result.skipped = r->skipped;
  return result;
}

std::array<std::uint8_t, kTupleSize> Registry::encrypt_for_device(DeviceId id, ByteView payload) {
  std::shared_lock table(table_mutex_);
  auto it = devices_.find(id);
  if (it == devices_.end()) throw UnknownDevice("unknown device: " + id.to_hex());
  Slot& slot = *it->second;
  std::lock_guard device(slot.mutex);
  return encode_tuple(id, slot.record.session.encrypt_next(payload));
}

std::vector<DeviceId> Registry::stale_devices(std::uint64_t threshold) const {
  std::shared_lock table(table_mutex_);
  const std::uint64_t now = clock_.load();
  std::vector<DeviceId> out;
  for (const auto& [id, slot] : devices_) {
    std::lock_guard device(slot->mutex);
    if (now - slot->record.last_accepted > threshold) out.push_back(id);
  }
  return out;
}

std::optional<DeviceStatus> Registry::status(DeviceId id) const {
  std::shared_lock table(table_mutex_);
  auto it = devices_.find(id);
  if (it == devices_.end()) return std::nullopt;
  std::lock_guard device(it->second->mutex);
  return snapshot(it->second->record);
}

std::vector<DeviceId> Registry::device_ids() const {
  std::shared_lock table(table_mutex_);
  std::vector<DeviceId> ids;
  for (const auto& [id, slot] : devices_) ids.push_back(id);
  return ids;
}

std::size_t Registry::size() const {
  std::shared_lock table(table_mutex_);
  return devices_.size();
}

void Registry::set_resync_window(DeviceId id, std::size_t window) {
  std::shared_lock table(table_mutex_);
  auto it = devices_.find(id);
  if (it == devices_.end()) throw UnknownDevice("unknown device: " + id.to_hex());
  std::lock_guard device(it->second->mutex);
  it->second->record.session.set_resync_window(window);
}

void Registry::set_window_cache(bool on) {
  std::unique_lock table(table_mutex_);
  window_cache_ = on;
  for (auto& [id, slot] : devices_) {
    std::lock_guard device(slot->mutex);
    slot->record.session.set_window_cache(on);
  }
}

void Registry::save_state(std::ostream& out) const {
  std::unique_lock table(table_mutex_);
  out << "# fogseal state: id_hex sk_hex mode window e_ctr d_ctr\n";
  for (const auto& [id, slot] : devices_) {
    const Session& s = slot->record.session;
    const auto c = s.peek_counters();
    out << id.to_hex() << ' ' << to_hex(s.key().bytes()) << ' ' << to_string(s.mode()) << ' '
        << s.resync_window() << ' ' << c.e_ctr << ' ' << c.d_ctr << '\n';
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw Error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot replace " + path.string());
  }
}

void Registry::save_state_file(const std::filesystem::path& path) const {
  std::ostringstream out;
  save_state(out);
  write_file_atomic(path, out.str());
}

namespace {

template <typename T>
bool parse_uint(const std::string& s, T& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

Registry Registry::load_state(std::istream& in, std::string hash) {
  Registry reg(std::move(hash));
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw ParseError(0, "read error");
  const std::string text = buf.str();
  std::istringstream lines(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    std::string id_hex, sk_hex, mode, window, e_ctr, d_ctr, extra;
    if (!(fields >> id_hex >> sk_hex >> mode >> window >> e_ctr >> d_ctr)) {
      throw ParseError(lineno, "expected 6 fields: id_hex sk_hex mode window e_ctr d_ctr");
    }
    if (fields >> extra) throw ParseError(lineno, "trailing field '" + extra + "'");

    std::array<std::uint8_t, kDeviceIdSize> id{};
    SecretKey::Array sk{};
    std::size_t w = 0;
    std::uint64_t e = 0, d = 0;
    if (!try_from_hex(id_hex, id)) throw ParseError(lineno, "id must be 16 hex digits");
    if (!try_from_hex(sk_hex, sk)) throw ParseError(lineno, "sk must be 54 hex digits");
    if (!parse_uint(window, w)) throw ParseError(lineno, "bad window '" + window + "'");
    if (!parse_uint(e_ctr, e)) throw ParseError(lineno, "bad e_ctr '" + e_ctr + "'");
    if (!parse_uint(d_ctr, d)) throw ParseError(lineno, "bad d_ctr '" + d_ctr + "'");
    try {
      SessionOptions opts{parse_counter_mode(mode), w, reg.hash_};
      reg.register_session(DeviceId::from_bytes(id),
                           Session::restore(SecretKey(sk), std::move(opts), e, d));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      throw ParseError(lineno, err.what());
    }
  }
  // Every record line is newline-terminated; a missing final newline means
  // the file was cut short.
  if (!text.empty() && text.back() != '\n') throw ParseError(lineno, "truncated final line");
  return reg;
}

Registry Registry::load_state_file(const std::filesystem::path& path, std::string hash) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  return load_state(f, std::move(hash));
}

}  // namespace fogseal
