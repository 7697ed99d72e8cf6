// BLS aggregation: the naive scheme, the fast same-message check, the
// three rogue-key mitigations (distinct messages, message augmentation,
// proof of possession), and executable constructors for the rogue public
// key and splitting-zero attacks.
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aggsig/bls.hpp"

namespace aggsig {

// A bare product of signatures. Deliberately indistinguishable from a
// single Signature by anything but the type name: aggregation does not
// tag its output.
struct AggregateSignature {
  GroupElement sigma_agg;  // element of G0
};

// Throws on an empty input.
AggregateSignature agg(std::span<const Signature> sigs);

// Naive check: e(sigma_agg, g1) = prod e(H(m_i), pk_i). Empty or
// mismatched input vectors verify as false.
bool vfy_agg_naive(const PairingContext& ctx, const AggregateSignature& sa,
                   std::span<const std::string> msgs, std::span<const GroupElement> pks);

// Same-message shortcut: two pairings against the aggregate public key
// instead of n+1. Agrees with the naive check whenever all messages are
// equal and apk is the product of the participant keys.
bool vfy_agg_same_message(const PairingContext& ctx, const AggregateSignature& sa,
                          std::string_view msg, const GroupElement& apk);

// Mitigation 1: reject any input with duplicate messages, then verify
// naively. Duplicates are rejected even for honest aggregates.
bool vfy_agg_distinct(const PairingContext& ctx, const AggregateSignature& sa,
                      std::span<const std::string> msgs, std::span<const GroupElement> pks);

// Mitigation 2: the signed message is the pair (pk, m), hashed under a
// canonical length-prefixed encoding.
Signature sign_augmented(const PairingContext& ctx, std::string_view msg, const KeyPair& kp);
bool vfy_agg_augmented(const PairingContext& ctx, const AggregateSignature& sa,
                       std::span<const std::string> msgs, std::span<const GroupElement> pks);

// Mitigation 3: proof of possession. pi = H'(u)^sk is a self-signature
// over the public key u under the domain-separated hash.
struct PopKey {
  GroupElement u;   // g1^sk
  GroupElement pi;  // H'(u)^sk
};

std::pair<Scalar, PopKey> gen_pop(const PairingContext& ctx, Rng& rng);
bool vfy_pop(const PairingContext& ctx, const PopKey& key);
bool vfy_agg_pop(const PairingContext& ctx, const AggregateSignature& sa,
                 std::span<const std::string> msgs, std::span<const PopKey> keys);

// Rogue public key attack. From pk_target alone the forger picks alpha,
// sets pk_rogue = g1^alpha / pk_target and sigma = H(m)^alpha. The result
// verifies naively for (m, m) under (pk_target, pk_rogue) although the
// target's secret key never enters the computation.
struct RogueForgery {
  GroupElement pk_rogue;
  AggregateSignature sigma_agg;
  Scalar alpha;  // the forger's private exponent, kept for transcripts
};

RogueForgery rogue_key_forge(const PairingContext& ctx, const GroupElement& pk_target,
                             std::string_view msg, Rng& rng);
RogueForgery rogue_key_forge_with(const PairingContext& ctx, const GroupElement& pk_target,
                                  std::string_view msg, Scalar alpha);

// Splitting-zero key pair: sk1 + sk2 = 0 mod q with both keys nonzero, so
// both public keys pass the identity check while their signatures on a
// common message cancel to the identity.
std::pair<Scalar, Scalar> splitting_zero_keys(const PairingContext& ctx, Rng& rng);

// Canonical length-prefixed encoding of (pk, m) used by the augmented
// scheme's hash input.
std::string augmented_message(const GroupElement& pk, std::string_view msg);

}  // namespace aggsig
