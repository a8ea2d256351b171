#include "fogseal/session.hpp"

#include <algorithm>

#include "fogseal/errors.hpp"

namespace fogseal {

std::string_view to_string(CounterMode m) noexcept {
  return m == CounterMode::dual ? "dual" : "single";
}

CounterMode parse_counter_mode(std::string_view s) {
  if (s == "dual") return CounterMode::dual;
  if (s == "single") return CounterMode::single;
  throw ValidationError("counter mode must be 'single' or 'dual', got '" + std::string(s) + "'");
}

Session::Session(const SecretKey& sk, SessionOptions opts)
    : sk_(sk), opts_(std::move(opts)), hash_(&find_hash(opts_.hash)) {
  if (opts_.resync_window > kMaxResyncWindow) {
    throw ValidationError("resync window exceeds 5,000,000");
  }
}

Session Session::restore(const SecretKey& sk, SessionOptions opts, std::uint64_t e_ctr,
                         std::uint64_t d_ctr) {
  if (e_ctr > Counter::kMax || d_ctr > Counter::kMax) {
    throw CounterOverflow("persisted counter exceeds 2^40 - 1");
  }
  if (opts.mode == CounterMode::single && e_ctr != d_ctr) {
    throw ValidationError("single-counter session requires e_ctr == d_ctr");
  }
  Session s(sk, std::move(opts));
  s.counters_[0] = e_ctr;
  s.counters_[1] = d_ctr;
  if (s.opts_.mode == CounterMode::single) s.counters_[1] = 0;
  return s;
}

void Session::set_resync_window(std::size_t w) {
  if (w > kMaxResyncWindow) throw ValidationError("resync window exceeds 5,000,000");
  opts_.resync_window = w;
}

CounterSnapshot Session::peek_counters() const noexcept {
  return {counters_[enc_index()], counters_[dec_index()]};
}

Digest Session::digest_for(std::size_t run, std::uint64_t ctr, bool cache) {
  if (const Digest* d = runs_[run].find(ctr)) return *d;
  Digest d = derive_digest(sk_, Counter(ctr), *hash_);
  if (cache) runs_[run].push(ctr, d);
  return d;
}

void Session::commit(std::size_t run, std::uint64_t ctr) {
  counters_[run] = ctr;
  runs_[run].discard_through(ctr);
}

// Same bytes as xor_block(frame_message(payload, sk).to_bytes(), D || D):
// start from the keystream and fold the framed fields in.
CipherBlock Session::encrypt_next(ByteView payload) {
  if (payload.size() > kMaxPayload) {
    throw PayloadTooLong("payload of " + std::to_string(payload.size()) + " bytes exceeds 55");
  }
  const std::size_t run = enc_index();
  if (counters_[run] >= Counter::kMax) {
    throw RekeyRequired("encryption counter exhausted; a new key is required");
  }
  const std::uint64_t ctr = counters_[run] + 1;
  const Digest d = digest_for(run, ctr, false);

  CipherBlock out;
  auto& b = out.bytes;
  std::copy(d.begin(), d.end(), b.begin());
  std::copy(d.begin(), d.end(), b.begin() + kDigestSize);
  const std::size_t n = payload.size();
  for (std::size_t i = 0; i < n; ++i) b[i] ^= payload[i];
  b[kLengthOffset] ^= static_cast<std::uint8_t>(n);
  const auto check = sk_.check_value();
  for (std::size_t i = 0; i < kCheckSize; ++i) b[kCheckOffset + i] ^= check[i];
  commit(run, ctr);
  return out;
}

// Equivalent to deframe_message(xor(enc, D || D)); the check and length
// bytes are tested before the payload is unmasked.
std::optional<Payload> Session::try_candidate(const CipherBlock& enc, const Digest& d) const noexcept {
  const auto check = sk_.check_value();
  for (std::size_t i = 0; i < kCheckSize; ++i) {
    const std::size_t pos = kCheckOffset + i;
    if (static_cast<std::uint8_t>(enc.bytes[pos] ^ d[pos - kDigestSize]) != check[i]) {
      return std::nullopt;
    }
  }
  const auto length =
      static_cast<std::uint8_t>(enc.bytes[kLengthOffset] ^ d[kLengthOffset - kDigestSize]);
  if (length > kMaxPayload) return std::nullopt;
  // Unmask at full width; bytes past the length stay inside the buffer.
  std::optional<Payload> out(std::in_place);
  const auto buf = out->buffer();
  for (std::size_t i = 0; i < kDigestSize; ++i) buf[i] = enc.bytes[i] ^ d[i];
  for (std::size_t i = kDigestSize; i < kMaxPayload; ++i) buf[i] = enc.bytes[i] ^ d[i - kDigestSize];
  out->resize(length);
  return out;
}

std::optional<Payload> Session::decrypt_next(const CipherBlock& enc) {
  const std::size_t run = dec_index();
  if (counters_[run] >= Counter::kMax) return std::nullopt;
  const std::uint64_t ctr = counters_[run] + 1;
  auto payload = try_candidate(enc, digest_for(run, ctr, window_cache_));
  if (payload) commit(run, ctr);
  return payload;
}

std::optional<ResyncResult> Session::decrypt_with_resync(const CipherBlock& enc) {
  const std::size_t run = dec_index();
  const std::uint64_t base = counters_[run];
  if (base >= Counter::kMax) return std::nullopt;
  const std::uint64_t last =
      std::min<std::uint64_t>(Counter::kMax, base + 1 + opts_.resync_window);
  for (std::uint64_t ctr = base + 1; ctr <= last; ++ctr) {
    if (auto payload = try_candidate(enc, digest_for(run, ctr, window_cache_))) {
      commit(run, ctr);
      return ResyncResult{*payload, ctr - base - 1};
    }
  }
  return std::nullopt;
}

void Session::precompute_encrypt(std::size_t n) {
  const std::size_t run = enc_index();
  runs_[run].assign(precompute_keystream(sk_, Counter(counters_[run] + 1), n, *hash_));
}

void Session::precompute_decrypt(std::size_t n) {
  const std::size_t run = dec_index();
  runs_[run].assign(precompute_keystream(sk_, Counter(counters_[run] + 1), n, *hash_));
}

void Session::set_window_cache(bool on) {
  window_cache_ = on;
  if (!on) runs_[dec_index()].clear();
}

}  // namespace fogseal
