#include "aggsig/oas.hpp"

#include <algorithm>
#include <stdexcept>

namespace aggsig {

namespace {

bool element_less(const GroupElement& a, const GroupElement& b) {
  return a.exponent().value() < b.exponent().value();
}

std::vector<GroupElement> merge_signers(const std::vector<GroupElement>& a,
                                        const std::vector<GroupElement>& b) {
  std::vector<GroupElement> out = a;
  for (const auto& e : b) {
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  }
  std::sort(out.begin(), out.end(), element_less);
  return out;
}

}  // namespace

ClaimSet ClaimSet::single(std::string message, GroupElement signer) {
  ClaimSet cs;
  cs.claims_.push_back(Claim{std::move(message), {signer}});
  return cs;
}

bool ClaimSet::contains_signer(const GroupElement& pk) const {
  for (const auto& c : claims_) {
    if (std::find(c.signers.begin(), c.signers.end(), pk) != c.signers.end()) return true;
  }
  return false;
}

bool ClaimSet::operator==(const ClaimSet& o) const {
  if (claims_.size() != o.claims_.size()) return false;
  for (std::size_t i = 0; i < claims_.size(); ++i) {
    if (claims_[i].message != o.claims_[i].message) return false;
    if (claims_[i].signers != o.claims_[i].signers) return false;
  }
  return true;
}

void ClaimSet::insert(const Claim& c) {
  for (auto& existing : claims_) {
    if (existing.message == c.message) {
      existing.signers = merge_signers(existing.signers, c.signers);
      return;
    }
  }
  claims_.push_back(c);
  std::sort(claims_.begin(), claims_.end(),
            [](const Claim& a, const Claim& b) { return a.message < b.message; });
}

ClaimSet claim_merge(const ClaimSet& a, const ClaimSet& b) {
  ClaimSet out = a;
  for (const auto& c : b.claims_) out.insert(c);
  return out;
}

GroupElement oas_agg_pk(std::span<const GroupElement> pks) {
  if (pks.empty()) throw std::invalid_argument("oas_agg_pk: empty key sequence");
  GroupElement acc = pks[0];
  for (std::size_t i = 1; i < pks.size(); ++i) acc = mul(acc, pks[i]);
  return acc;
}

OASSignature oas_sign(const PairingContext& ctx, std::string_view msg,
                      std::string_view default_msg, const KeyPair& kp) {
  GroupElement tau = exp(ctx.hash_to_g0(msg), kp.sk);
  if (msg == default_msg) return OASSignature{tau, ClaimSet{}};
  return OASSignature{tau, ClaimSet::single(std::string(msg), kp.pk)};
}

OASSignature oas_agg(const OASSignature& a, const OASSignature& b) {
  for (const auto& c : b.claims.claims()) {
    for (const auto& pk : c.signers) {
      if (a.claims.contains_signer(pk))
        throw std::invalid_argument("oas_agg: signer sets overlap");
    }
  }
  return OASSignature{mul(a.tau, b.tau), claim_merge(a.claims, b.claims)};
}

std::optional<ClaimSet> oas_vfy_agg(const PairingContext& ctx,
                                    std::span<const GroupElement> s_bot,
                                    const OASSignature& sig, std::string_view default_msg,
                                    const GroupElement& apk) {
  if (apk.group() != Group::G1 || sig.tau.group() != Group::G0) return std::nullopt;
  GroupElement removed = ctx.identity(Group::G1);
  for (const auto& pk : s_bot) {
    if (sig.claims.contains_signer(pk)) return std::nullopt;
    removed = mul(removed, pk);
  }
  for (const auto& c : sig.claims.claims()) {
    if (c.message == default_msg) return std::nullopt;
    if (c.signers.empty()) return std::nullopt;
    for (const auto& pk : c.signers) removed = mul(removed, pk);
  }
  GroupElement apk_m = mul(apk, inv(removed));
  GroupElement rhs = pair(ctx.hash_to_g0(default_msg), apk_m);
  for (const auto& c : sig.claims.claims()) {
    GroupElement group_pk = oas_agg_pk(c.signers);
    rhs = mul(rhs, pair(ctx.hash_to_g0(c.message), group_pk));
  }
  if (pair(sig.tau, ctx.g1()) != rhs) return std::nullopt;
  return sig.claims;
}

OASSignature lift_bls_to_oas(const Signature& sig, std::string_view msg,
                             std::string_view default_msg, const GroupElement& pk) {
  if (msg == default_msg) return OASSignature{sig.sigma, ClaimSet{}};
  return OASSignature{sig.sigma, ClaimSet::single(std::string(msg), pk)};
}

}  // namespace aggsig
