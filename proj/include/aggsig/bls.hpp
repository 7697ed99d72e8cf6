// Single-signer BLS over the simulated pairing: sk in Z_q, pk = g1^sk,
// sigma = H(m)^sk, accept iff e(H(m), pk) = e(sigma, g1).
#pragma once

#include <string_view>

#include "aggsig/group.hpp"
#include "aggsig/rng.hpp"

namespace aggsig {

struct KeyPair {
  Scalar sk;
  GroupElement pk;  // g1^sk
};

struct Signature {
  GroupElement sigma;  // element of G0
};

// Honest key generation: sk uniform in Z_q \ {0}.
KeyPair gen(const PairingContext& ctx, Rng& rng);

// Key pair from a chosen secret. Used by tests and by adversarial key
// construction, which is allowed to pick sk = 0.
KeyPair keypair_from_sk(const PairingContext& ctx, Scalar sk);

Signature sign(const PairingContext& ctx, std::string_view msg, const Scalar& sk);

enum class IdentityCheck { Off, On };

// Never throws; invalid inputs just fail to verify. With the identity
// check on (the default), an identity public key is rejected outright,
// which blocks the zero-key signature that would otherwise verify for
// every message.
bool vfy(const PairingContext& ctx, const Signature& sig, std::string_view msg,
         const GroupElement& pk, IdentityCheck check = IdentityCheck::On);

}  // namespace aggsig
