#include "fogseal/hashcore.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "fogseal/errors.hpp"

namespace fogseal {

namespace {

struct MdDeleter {
  void operator()(EVP_MD* md) const noexcept { EVP_MD_free(md); }
};
struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const noexcept { EVP_MD_CTX_free(ctx); }
};

const EVP_MD* blake2s_md() {
  static const std::unique_ptr<EVP_MD, MdDeleter> md(EVP_MD_fetch(nullptr, "BLAKE2S-256", nullptr));
  if (!md) throw Error("OpenSSL provides no BLAKE2S-256");
  return md.get();
}

void blake2s256_digest(ByteView message, std::span<std::uint8_t, kDigestSize> out) {
  thread_local const std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex2(ctx.get(), blake2s_md(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), message.data(), message.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != kDigestSize) {
    throw Error("BLAKE2s-256 digest failed");
  }
}

struct HashRegistry {
  std::shared_mutex mutex;
  std::map<std::string, HashFn, std::less<>> entries;

  HashRegistry() {
    // 107-byte working state by default; see set_hash_state_size.
    entries.emplace(std::string(kDefaultHash),
                    HashFn{std::string(kDefaultHash), kDigestSize, 107, &blake2s256_digest});
  }
};

HashRegistry& registry() {
  static HashRegistry r;
  return r;
}

}  // namespace

const HashFn& find_hash(std::string_view name) {
  auto& r = registry();
  std::shared_lock lock(r.mutex);
  auto it = r.entries.find(name);
  if (it == r.entries.end()) throw UnknownHash("unknown hash: " + std::string(name));
  return it->second;
}

void register_hash(HashFn fn) {
  if (fn.digest_size != kDigestSize) throw LengthError("hash digest size must be 32 bytes");
  if (fn.digest == nullptr) throw Error("hash has no digest function");
  auto& r = registry();
  std::unique_lock lock(r.mutex);
  auto it = r.entries.find(fn.name);
  if (it != r.entries.end()) {
    it->second = std::move(fn);
  } else {
    std::string key = fn.name;
    r.entries.emplace(std::move(key), std::move(fn));
  }
}

std::vector<std::string> hash_names() {
  auto& r = registry();
  std::shared_lock lock(r.mutex);
  std::vector<std::string> names;
  for (const auto& [name, fn] : r.entries) names.push_back(name);
  return names;
}

void set_hash_state_size(std::string_view name, std::size_t state_size) {
  auto& r = registry();
  std::unique_lock lock(r.mutex);
  auto it = r.entries.find(name);
  if (it == r.entries.end()) throw UnknownHash("unknown hash: " + std::string(name));
  it->second.state_size = state_size;
}

Keystream64 Keystream64::from_digest(const Digest& d) noexcept {
  Keystream64 ks;
  std::copy(d.begin(), d.end(), ks.bytes.begin());
  std::copy(d.begin(), d.end(), ks.bytes.begin() + kDigestSize);
  return ks;
}

Digest hash32(ByteView input, const HashFn& h) {
  if (input.size() != kHashInputSize) {
    throw LengthError("hash32 input must be 32 bytes, got " + std::to_string(input.size()));
  }
  Digest out;
  h.digest(input, out);
  return out;
}

HashInput key_input(const SecretKey& sk, Counter ctr) noexcept {
  HashInput in;
  const auto& key = sk.bytes();
  std::copy(key.begin(), key.end(), in.begin());
  const auto c = ctr.to_bytes();
  std::copy(c.begin(), c.end(), in.begin() + kSecretKeySize);
  return in;
}

Digest derive_digest(const SecretKey& sk, Counter ctr, const HashFn& h) {
  if (ctr.value() == 0) throw InvalidCounter("keystream counter must be >= 1");
  // The local copy is SK'; sk itself is never handed to the hash.
  const HashInput in = key_input(sk, ctr);
  Digest out;
  h.digest(in, out);
  return out;
}

Keystream64 derive_keystream(const SecretKey& sk, Counter ctr, const HashFn& h) {
  return Keystream64::from_digest(derive_digest(sk, ctr, h));
}

PrecomputedKeystream precompute_keystream(const SecretKey& sk, Counter start, std::size_t n,
                                          const HashFn& h) {
  if (start.value() == 0) throw InvalidCounter("keystream counter must be >= 1");
  if (n > 0 && n - 1 > Counter::kMax - start.value()) {
    throw CounterOverflow("precompute range passes 2^40 - 1");
  }
  std::vector<Digest> digests;
  digests.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    digests.push_back(derive_digest(sk, Counter(start.value() + i), h));
  }
  return {start, std::move(digests)};
}

const Digest* DigestRun::find(std::uint64_t ctr) const noexcept {
  if (ctr < first_ || ctr >= end()) return nullptr;
  return &digests_[static_cast<std::size_t>(ctr - first_)];
}

void DigestRun::discard_through(std::uint64_t ctr) {
  if (ctr < first_) return;
  if (ctr >= end()) {
    digests_.clear();
    first_ = ctr + 1;
    return;
  }
  const auto drop = static_cast<std::size_t>(ctr - first_ + 1);
  digests_.erase(digests_.begin(), digests_.begin() + static_cast<std::ptrdiff_t>(drop));
  first_ = ctr + 1;
}

void DigestRun::push(std::uint64_t ctr, const Digest& d) {
  if (digests_.empty()) {
    first_ = ctr;
  } else if (ctr != end()) {
    return;  // not contiguous
  }
  digests_.push_back(d);
}

void DigestRun::assign(const PrecomputedKeystream& ks) {
  digests_.assign(ks.digests().begin(), ks.digests().end());
  first_ = ks.start().value();
}

std::string format_kat(const KatVector& v) {
  const auto c = v.ctr.to_bytes();
  return to_hex(v.sk.bytes()) + " " + to_hex(c) + " " + to_hex(v.keystream.bytes);
}

std::vector<KatVector> parse_kat(std::string_view text) {
  std::vector<KatVector> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string sk_hex, ctr_hex, ks_hex, extra;
    if (!(fields >> sk_hex >> ctr_hex >> ks_hex) || (fields >> extra)) {
      throw ParseError(lineno, "expected 3 fields");
    }
    SecretKey::Array sk{};
    std::array<std::uint8_t, kCounterSize> ctr{};
    KatVector v;
    if (!try_from_hex(sk_hex, sk)) throw ParseError(lineno, "bad sk_hex");
    if (!try_from_hex(ctr_hex, ctr)) throw ParseError(lineno, "bad ctr_hex");
    if (!try_from_hex(ks_hex, v.keystream.bytes)) throw ParseError(lineno, "bad keystream_hex");
    v.sk = SecretKey(sk);
    v.ctr = Counter::from_bytes(ctr);
    out.push_back(v);
  }
  return out;
}

std::vector<KatVector> zero_key_vectors(std::size_t count, const HashFn& h) {
  std::vector<KatVector> out;
  const SecretKey zero;
  for (std::size_t i = 1; i <= count; ++i) {
    Counter c(i);
    out.push_back({zero, c, derive_keystream(zero, c, h)});
  }
  return out;
}

}  // namespace fogseal
