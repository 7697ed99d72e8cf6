// Optimistic aggregate signatures. A signature is a pair (tau, B): tau is
// an ordinary BLS-style aggregate in G0 and B is the claim set naming the
// signers that deviated from the default message M. Verification divides
// the non-contributing and deviating keys out of the aggregate public key
// and checks one pairing per distinct deviant message.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aggsig/bls.hpp"

namespace aggsig {

// One claim: a message plus the set of public keys whose owners signed
// it. Signer sets are kept sorted by exponent.
struct Claim {
  std::string message;
  std::vector<GroupElement> signers;
};

// Claims sorted by message, messages pairwise distinct, signer sets
// nonempty. Equality is decidable because the form is canonical.
class ClaimSet {
 public:
  ClaimSet() = default;
  static ClaimSet single(std::string message, GroupElement signer);

  bool empty() const { return claims_.empty(); }
  std::size_t size() const { return claims_.size(); }
  const std::vector<Claim>& claims() const { return claims_; }

  bool contains_signer(const GroupElement& pk) const;

  bool operator==(const ClaimSet& o) const;
  bool operator!=(const ClaimSet& o) const { return !(*this == o); }

  friend ClaimSet claim_merge(const ClaimSet& a, const ClaimSet& b);

 private:
  void insert(const Claim& c);
  std::vector<Claim> claims_;
};

// Union of two claim sets, merging the signer sets of equal messages into
// a single claim.
ClaimSet claim_merge(const ClaimSet& a, const ClaimSet& b);

struct OASSignature {
  GroupElement tau;  // element of G0
  ClaimSet claims;
};

// Product of the participant public keys. Throws on empty input.
GroupElement oas_agg_pk(std::span<const GroupElement> pks);

// tau = H(m)^sk; the claim set is empty exactly when m is the default
// message.
OASSignature oas_sign(const PairingContext& ctx, std::string_view msg,
                      std::string_view default_msg, const KeyPair& kp);

// Componentwise aggregation. The inputs' claim sets must not share a
// signer (usage error on overlap).
OASSignature oas_agg(const OASSignature& a, const OASSignature& b);

// Returns the claim set on success and nullopt (bottom) on failure.
// Fails when a claimed signer also appears in s_bot, or when the pairing
// product equation does not hold for
//   apk_M = apk / (prod s_bot * prod claimed signers).
std::optional<ClaimSet> oas_vfy_agg(const PairingContext& ctx,
                                    std::span<const GroupElement> s_bot,
                                    const OASSignature& sig, std::string_view default_msg,
                                    const GroupElement& apk);

// A valid BLS signature is an OAS signature whose claim set is empty or
// the single claim {(m, {pk})}, so BLS output aggregates freely with
// native OAS signatures.
OASSignature lift_bls_to_oas(const Signature& sig, std::string_view msg,
                             std::string_view default_msg, const GroupElement& pk);

}  // namespace aggsig
