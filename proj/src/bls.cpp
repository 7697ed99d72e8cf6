#include "aggsig/bls.hpp"

namespace aggsig {

KeyPair gen(const PairingContext& ctx, Rng& rng) {
  Scalar sk = ctx.scalar(rng.nonzero_below(ctx.modulus()));
  return keypair_from_sk(ctx, sk);
}

KeyPair keypair_from_sk(const PairingContext& ctx, Scalar sk) {
  return KeyPair{sk, exp(ctx.g1(), sk)};
}

Signature sign(const PairingContext& ctx, std::string_view msg, const Scalar& sk) {
  return Signature{exp(ctx.hash_to_g0(msg), sk)};
}

bool vfy(const PairingContext& ctx, const Signature& sig, std::string_view msg,
         const GroupElement& pk, IdentityCheck check) {
  if (sig.sigma.group() != Group::G0 || pk.group() != Group::G1) return false;
  if (check == IdentityCheck::On && pk.is_identity()) return false;
  return pair(ctx.hash_to_g0(msg), pk) == pair(sig.sigma, ctx.g1());
}

}  // namespace aggsig
