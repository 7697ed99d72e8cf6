// Simulated bilinear group. G0, G1 and GT are cyclic groups of prime
// order q; an element is stored as the exponent of the fixed generator,
// so the pairing e(g0^a, g1^b) = gT^(a*b) is exact exponent arithmetic.
//
// The simulation preserves every algebraic identity of the real scheme
// (aggregation, rogue-key and splitting-zero equations hold bit for bit)
// but it is NOT hiding: anyone can read the discrete log off an element.
// Do not use this for anything but analysis and tests.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "aggsig/scalar.hpp"

namespace aggsig {

enum class Group : std::uint8_t { G0, G1, GT };

std::string_view group_name(Group g);

class PairingContext;

// An element of G0/G1/GT, held as generator exponent. Elements are value
// types; operations throw std::invalid_argument on group or modulus
// mismatch.
class GroupElement {
 public:
  GroupElement() : group_(Group::G0), exp_() {}
  GroupElement(Group g, Scalar exp) : group_(g), exp_(exp) {}

  Group group() const { return group_; }
  const Scalar& exponent() const { return exp_; }
  bool is_identity() const { return exp_.is_zero(); }

  bool operator==(const GroupElement& o) const {
    return group_ == o.group_ && exp_ == o.exp_;
  }
  bool operator!=(const GroupElement& o) const { return !(*this == o); }

 private:
  Group group_;
  Scalar exp_;
};

GroupElement mul(const GroupElement& a, const GroupElement& b);
GroupElement inv(const GroupElement& a);
GroupElement exp(const GroupElement& a, const Scalar& s);

// e : G0 x G1 -> GT. Result exponent is the product of the inputs'
// exponents mod q.
GroupElement pair(const GroupElement& a, const GroupElement& b);

// Shared parameters: the modulus plus the hash-to-scalar function behind
// H and H'. The hash is injectable so tests can pin exponents.
class PairingContext {
 public:
  // domain is "H" or "Hp"; counter is the retry counter of hash_to_g0.
  using HashToScalar = std::function<std::uint64_t(
      std::string_view domain, std::span<const std::uint8_t> msg, std::uint64_t counter)>;

  explicit PairingContext(std::uint64_t q);
  PairingContext(std::uint64_t q, HashToScalar hash);

  std::uint64_t modulus() const { return q_; }

  Scalar scalar(std::uint64_t v) const { return Scalar(v, q_); }
  GroupElement element(Group g, std::uint64_t e) const {
    return GroupElement(g, scalar(e));
  }
  GroupElement identity(Group g) const { return element(g, 0); }
  GroupElement g0() const { return element(Group::G0, 1); }
  GroupElement g1() const { return element(Group::G1, 1); }
  GroupElement gT() const { return element(Group::GT, 1); }

  // H : messages -> G0 \ {1}. Deterministic; the digest is re-run with an
  // incremented counter while it reduces to zero, so the identity is never
  // returned.
  GroupElement hash_to_g0(std::string_view msg) const;
  // H' : same construction under a separate domain tag (proof of
  // possession hashing).
  GroupElement hash_prime_to_g0(std::string_view msg) const;
  GroupElement hash_prime_to_g0(const GroupElement& e) const;

  // Stable byte encoding of an element, used when elements are hashed
  // (message augmentation, PoP): group tag byte followed by the exponent
  // in big-endian.
  static std::string encode(const GroupElement& e);

 private:
  GroupElement hash_with_domain(std::string_view domain, std::string_view msg) const;

  std::uint64_t q_;
  HashToScalar hash_;
};

// Default digest: SHA-256 over domain || 0x00 || msg || counter_be64,
// first 8 bytes taken big-endian, reduced mod q.
std::uint64_t default_hash_to_scalar(std::uint64_t q, std::string_view domain,
                                     std::span<const std::uint8_t> msg,
                                     std::uint64_t counter);

// Test moduli used throughout: 101 keeps examples hand-checkable, 2^61-1
// keeps randomized suites collision-free.
inline constexpr std::uint64_t kTinyPrime = 101;
inline constexpr std::uint64_t kLargePrime = (std::uint64_t{1} << 61) - 1;

}  // namespace aggsig
