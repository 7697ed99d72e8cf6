#include "aggsig/aggregate.hpp"

#include <set>
#include <stdexcept>

namespace aggsig {

AggregateSignature agg(std::span<const Signature> sigs) {
  if (sigs.empty()) throw std::invalid_argument("agg: empty signature sequence");
  GroupElement acc = sigs[0].sigma;
  for (std::size_t i = 1; i < sigs.size(); ++i) acc = mul(acc, sigs[i].sigma);
  return AggregateSignature{acc};
}

bool vfy_agg_naive(const PairingContext& ctx, const AggregateSignature& sa,
                   std::span<const std::string> msgs, std::span<const GroupElement> pks) {
  if (msgs.empty() || msgs.size() != pks.size()) return false;
  GroupElement lhs = pair(sa.sigma_agg, ctx.g1());
  GroupElement rhs = ctx.identity(Group::GT);
  for (std::size_t i = 0; i < msgs.size(); ++i) {
    if (pks[i].group() != Group::G1) return false;
    rhs = mul(rhs, pair(ctx.hash_to_g0(msgs[i]), pks[i]));
  }
  return lhs == rhs;
}

bool vfy_agg_same_message(const PairingContext& ctx, const AggregateSignature& sa,
                          std::string_view msg, const GroupElement& apk) {
  if (apk.group() != Group::G1) return false;
  return pair(sa.sigma_agg, ctx.g1()) == pair(ctx.hash_to_g0(msg), apk);
}

bool vfy_agg_distinct(const PairingContext& ctx, const AggregateSignature& sa,
                      std::span<const std::string> msgs, std::span<const GroupElement> pks) {
  std::set<std::string> seen;
  for (const auto& m : msgs) {
    if (!seen.insert(m).second) return false;
  }
  return vfy_agg_naive(ctx, sa, msgs, pks);
}

std::string augmented_message(const GroupElement& pk, std::string_view msg) {
  std::string out = PairingContext::encode(pk);
  std::uint64_t n = msg.size();
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<char>((n >> (8 * i)) & 0xff));
  out.append(msg);
  return out;
}

Signature sign_augmented(const PairingContext& ctx, std::string_view msg, const KeyPair& kp) {
  return Signature{exp(ctx.hash_to_g0(augmented_message(kp.pk, msg)), kp.sk)};
}

bool vfy_agg_augmented(const PairingContext& ctx, const AggregateSignature& sa,
                       std::span<const std::string> msgs, std::span<const GroupElement> pks) {
  if (msgs.empty() || msgs.size() != pks.size()) return false;
  GroupElement lhs = pair(sa.sigma_agg, ctx.g1());
  GroupElement rhs = ctx.identity(Group::GT);
  for (std::size_t i = 0; i < msgs.size(); ++i) {
    if (pks[i].group() != Group::G1) return false;
    rhs = mul(rhs, pair(ctx.hash_to_g0(augmented_message(pks[i], msgs[i])), pks[i]));
  }
  return lhs == rhs;
}

std::pair<Scalar, PopKey> gen_pop(const PairingContext& ctx, Rng& rng) {
  Scalar sk = ctx.scalar(rng.nonzero_below(ctx.modulus()));
  GroupElement u = exp(ctx.g1(), sk);
  GroupElement pi = exp(ctx.hash_prime_to_g0(u), sk);
  return {sk, PopKey{u, pi}};
}

bool vfy_pop(const PairingContext& ctx, const PopKey& key) {
  if (key.u.group() != Group::G1 || key.pi.group() != Group::G0) return false;
  return pair(key.pi, ctx.g1()) == pair(ctx.hash_prime_to_g0(key.u), key.u);
}

bool vfy_agg_pop(const PairingContext& ctx, const AggregateSignature& sa,
                 std::span<const std::string> msgs, std::span<const PopKey> keys) {
  if (msgs.empty() || msgs.size() != keys.size()) return false;
  std::vector<GroupElement> pks;
  pks.reserve(keys.size());
  for (const auto& k : keys) {
    if (!vfy_pop(ctx, k)) return false;
    pks.push_back(k.u);
  }
  return vfy_agg_naive(ctx, sa, msgs, pks);
}

RogueForgery rogue_key_forge(const PairingContext& ctx, const GroupElement& pk_target,
                             std::string_view msg, Rng& rng) {
  return rogue_key_forge_with(ctx, pk_target, msg,
                              ctx.scalar(rng.nonzero_below(ctx.modulus())));
}

RogueForgery rogue_key_forge_with(const PairingContext& ctx, const GroupElement& pk_target,
                                  std::string_view msg, Scalar alpha) {
  if (pk_target.group() != Group::G1)
    throw std::invalid_argument("rogue_key_forge: target must live in G1");
  GroupElement pk_rogue = mul(exp(ctx.g1(), alpha), inv(pk_target));
  GroupElement sigma = exp(ctx.hash_to_g0(msg), alpha);
  return RogueForgery{pk_rogue, AggregateSignature{sigma}, alpha};
}

std::pair<Scalar, Scalar> splitting_zero_keys(const PairingContext& ctx, Rng& rng) {
  Scalar sk1 = ctx.scalar(rng.nonzero_below(ctx.modulus()));
  Scalar sk2 = sk1.negated();
  return {sk1, sk2};
}

}  // namespace aggsig
