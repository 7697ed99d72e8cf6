#include "aggsig/group.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstring>
#include <stdexcept>

namespace aggsig {

namespace {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t q) {
  std::uint64_t r = 1 % q;
  base %= q;
  while (e) {
    if (e & 1) r = mul_mod(r, base, q);
    base = mul_mod(base, base, q);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic Miller-Rabin witness set for 64-bit inputs.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::string_view group_name(Group g) {
  switch (g) {
    case Group::G0: return "G0";
    case Group::G1: return "G1";
    case Group::GT: return "GT";
  }
  return "?";
}

GroupElement mul(const GroupElement& a, const GroupElement& b) {
  if (a.group() != b.group()) throw std::invalid_argument("group tag mismatch in mul");
  return GroupElement(a.group(), a.exponent() + b.exponent());
}

GroupElement inv(const GroupElement& a) {
  return GroupElement(a.group(), a.exponent().negated());
}

GroupElement exp(const GroupElement& a, const Scalar& s) {
  return GroupElement(a.group(), a.exponent() * s);
}

GroupElement pair(const GroupElement& a, const GroupElement& b) {
  if (a.group() != Group::G0 || b.group() != Group::G1)
    throw std::invalid_argument("pair expects (G0, G1) operands");
  return GroupElement(Group::GT, a.exponent() * b.exponent());
}

PairingContext::PairingContext(std::uint64_t q) : PairingContext(q, nullptr) {}

PairingContext::PairingContext(std::uint64_t q, HashToScalar hash)
    : q_(q), hash_(std::move(hash)) {
  if (q >= (std::uint64_t{1} << 62)) throw std::invalid_argument("modulus too large");
  if (!is_prime_u64(q)) throw std::invalid_argument("modulus must be prime");
  if (!hash_) {
    hash_ = [q](std::string_view domain, std::span<const std::uint8_t> msg,
                std::uint64_t counter) {
      return default_hash_to_scalar(q, domain, msg, counter);
    };
  }
}

GroupElement PairingContext::hash_with_domain(std::string_view domain,
                                              std::string_view msg) const {
  std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(msg.data()),
                                      msg.size());
  for (std::uint64_t counter = 0;; ++counter) {
    std::uint64_t v = hash_(domain, bytes, counter) % q_;
    if (v != 0) return element(Group::G0, v);
  }
}

GroupElement PairingContext::hash_to_g0(std::string_view msg) const {
  return hash_with_domain("H", msg);
}

GroupElement PairingContext::hash_prime_to_g0(std::string_view msg) const {
  return hash_with_domain("Hp", msg);
}

GroupElement PairingContext::hash_prime_to_g0(const GroupElement& e) const {
  return hash_with_domain("Hp", encode(e));
}

std::string PairingContext::encode(const GroupElement& e) {
  std::string out;
  out.push_back(static_cast<char>(e.group()));
  std::uint64_t v = e.exponent().value();
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  return out;
}

std::uint64_t default_hash_to_scalar(std::uint64_t q, std::string_view domain,
                                     std::span<const std::uint8_t> msg,
                                     std::uint64_t counter) {
  // SHA-256 over domain || 0x00 || msg || counter_be64, first 8 bytes big-
  // endian, reduced mod q
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  EVP_DigestUpdate(ctx, domain.data(), domain.size());
  std::uint8_t sep = 0;
  EVP_DigestUpdate(ctx, &sep, 1);
  EVP_DigestUpdate(ctx, msg.data(), msg.size());
  std::array<std::uint8_t, 8> ctr{};
  for (int i = 0; i < 8; ++i) ctr[i] = static_cast<std::uint8_t>((counter >> (8 * (7 - i))) & 0xff);
  EVP_DigestUpdate(ctx, ctr.data(), ctr.size());
  std::array<std::uint8_t, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest.data(), &len);
  EVP_MD_CTX_free(ctx);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | digest[i];
  return v % q;
}

}  // namespace aggsig
