#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "aggsig/oas.hpp"

using namespace aggsig;

namespace {

PairingContext stub_context(std::uint64_t q, std::map<std::string, std::uint64_t> table) {
  return PairingContext(
      q, [table = std::move(table), q](std::string_view domain,
                                       std::span<const std::uint8_t> msg,
                                       std::uint64_t) -> std::uint64_t {
        std::string key(reinterpret_cast<const char*>(msg.data()), msg.size());
        auto it = table.find(key);
        if (it != table.end()) return it->second % q;
        return default_hash_to_scalar(q, domain, msg, 0);
      });
}

const std::string kDefault = "M";

}  // namespace

TEST_CASE("oas_agg_pk") {
  PairingContext ctx(101);
  std::vector<GroupElement> pks{ctx.element(Group::G1, 3), ctx.element(Group::G1, 4)};
  CHECK(oas_agg_pk(pks) == ctx.element(Group::G1, 7));
  std::vector<GroupElement> one{ctx.element(Group::G1, 9)};
  CHECK(oas_agg_pk(one) == one[0]);
  std::vector<GroupElement> rev{pks[1], pks[0]};
  CHECK(oas_agg_pk(rev) == oas_agg_pk(pks));
  CHECK_THROWS_AS(oas_agg_pk(std::vector<GroupElement>{}), std::invalid_argument);
}

TEST_CASE("oas_sign splits on the default message") {
  PairingContext ctx = stub_context(101, {{"M", 9}, {"m", 5}});
  KeyPair kp = keypair_from_sk(ctx, ctx.scalar(3));
  OASSignature on_default = oas_sign(ctx, "M", kDefault, kp);
  CHECK(on_default.tau == ctx.element(Group::G0, 27));
  CHECK(on_default.claims.empty());

  OASSignature deviant = oas_sign(ctx, "m", kDefault, kp);
  CHECK(deviant.tau == ctx.element(Group::G0, 15));
  REQUIRE(deviant.claims.size() == 1);
  CHECK(deviant.claims.claims()[0].message == "m");
  CHECK(deviant.claims.claims()[0].signers == std::vector<GroupElement>{kp.pk});
}

TEST_CASE("claim_merge") {
  PairingContext ctx(101);
  GroupElement pk1 = ctx.element(Group::G1, 3), pk2 = ctx.element(Group::G1, 4);
  ClaimSet a = ClaimSet::single("m", pk1);
  ClaimSet b = ClaimSet::single("m", pk2);
  ClaimSet merged = claim_merge(a, b);
  REQUIRE(merged.size() == 1);
  CHECK(merged.claims()[0].signers.size() == 2);

  CHECK(claim_merge(ClaimSet{}, a) == a);
  ClaimSet c = ClaimSet::single("other", pk2);
  CHECK(claim_merge(a, c).size() == 2);

  // associative, commutative, idempotent on equal claims
  CHECK(claim_merge(a, claim_merge(b, c)) == claim_merge(claim_merge(a, b), c));
  CHECK(claim_merge(a, b) == claim_merge(b, a));
  CHECK(claim_merge(a, a) == a);
}

TEST_CASE("oas_agg componentwise") {
  PairingContext ctx = stub_context(101, {{"M", 9}, {"m", 5}});
  KeyPair k1 = keypair_from_sk(ctx, ctx.scalar(3));
  KeyPair k2 = keypair_from_sk(ctx, ctx.scalar(4));
  OASSignature s1 = oas_sign(ctx, "M", kDefault, k1);
  OASSignature s2 = oas_sign(ctx, "M", kDefault, k2);
  OASSignature both = oas_agg(s1, s2);
  CHECK(both.tau == ctx.element(Group::G0, 63));  // 27 + 36
  CHECK(both.claims.empty());

  OASSignature dev = oas_sign(ctx, "m", kDefault, k2);
  OASSignature mixed = oas_agg(s1, dev);
  CHECK(mixed.tau == ctx.element(Group::G0, 47));  // 27 + 20
  REQUIRE(mixed.claims.size() == 1);
  CHECK(mixed.claims.claims()[0].signers == std::vector<GroupElement>{k2.pk});

  // same signer on both sides is a usage error
  CHECK_THROWS_AS(oas_agg(dev, dev), std::invalid_argument);
  // commutative up to claim-set equality
  OASSignature ba = oas_agg(dev, s1);
  CHECK(ba.tau == mixed.tau);
  CHECK(ba.claims == mixed.claims);
}

TEST_CASE("oas_vfy_agg hand examples") {
  PairingContext ctx = stub_context(101, {{"M", 9}, {"m", 5}});
  KeyPair k1 = keypair_from_sk(ctx, ctx.scalar(3));
  KeyPair k2 = keypair_from_sk(ctx, ctx.scalar(4));
  GroupElement apk = ctx.element(Group::G1, 7);
  std::vector<GroupElement> none;

  OASSignature both = oas_agg(oas_sign(ctx, "M", kDefault, k1), oas_sign(ctx, "M", kDefault, k2));
  auto r1 = oas_vfy_agg(ctx, none, both, kDefault, apk);
  REQUIRE(r1.has_value());
  CHECK(r1->empty());

  OASSignature mixed = oas_agg(oas_sign(ctx, "M", kDefault, k1), oas_sign(ctx, "m", kDefault, k2));
  auto r2 = oas_vfy_agg(ctx, none, mixed, kDefault, apk);
  REQUIRE(r2.has_value());
  CHECK(*r2 == mixed.claims);  // apk_M = g1^3; 9*3 + 5*4 = 47

  // perturbing tau by one fails
  OASSignature bad{mul(mixed.tau, ctx.g0()), mixed.claims};
  CHECK_FALSE(oas_vfy_agg(ctx, none, bad, kDefault, apk).has_value());

  // a claimed signer listed as non-contributing is inconsistent input
  std::vector<GroupElement> sbot{k2.pk};
  CHECK_FALSE(oas_vfy_agg(ctx, sbot, mixed, kDefault, apk).has_value());
}

TEST_CASE("correctness (i): single signer, arbitrary bystanders") {
  PairingContext ctx(kLargePrime);
  Rng rng(91);
  for (int round = 0; round < 200; ++round) {
    KeyPair kp = gen(ctx, rng);
    std::size_t extra = rng.below(4);
    std::vector<GroupElement> sbot;
    std::vector<GroupElement> all{kp.pk};
    for (std::size_t i = 0; i < extra; ++i) {
      KeyPair other = gen(ctx, rng);
      sbot.push_back(other.pk);
      all.push_back(other.pk);
    }
    bool use_default = rng.below(2) == 0;
    std::string m = use_default ? kDefault : ("dev-" + std::to_string(round));
    OASSignature sig = oas_sign(ctx, m, kDefault, kp);
    auto r = oas_vfy_agg(ctx, sbot, sig, kDefault, oas_agg_pk(all));
    REQUIRE(r.has_value());
    if (use_default) {
      CHECK(r->empty());
    } else {
      CHECK(*r == ClaimSet::single(m, kp.pk));
    }
  }
}

TEST_CASE("correctness (ii): aggregation of two verified aggregates") {
  PairingContext ctx(kLargePrime);
  Rng rng(92);
  for (int round = 0; round < 200; ++round) {
    auto build_side = [&](int idx, OASSignature& sig_out, std::vector<GroupElement>& set_out,
                          std::vector<GroupElement>& sbot_out) {
      std::size_t n = 1 + rng.below(3);  // contributing signers
      bool first = true;
      for (std::size_t i = 0; i < n; ++i) {
        KeyPair kp = gen(ctx, rng);
        std::string m = rng.below(2) == 0
                            ? kDefault
                            : ("d" + std::to_string(round) + "-" + std::to_string(idx) +
                               "-" + std::to_string(i));
        OASSignature s = oas_sign(ctx, m, kDefault, kp);
        sig_out = first ? s : oas_agg(sig_out, s);
        first = false;
        set_out.push_back(kp.pk);
      }
      std::size_t bystanders = rng.below(2);
      for (std::size_t i = 0; i < bystanders; ++i) {
        KeyPair kp = gen(ctx, rng);
        set_out.push_back(kp.pk);
        sbot_out.push_back(kp.pk);
      }
    };
    OASSignature s1, s2;
    std::vector<GroupElement> set1, set2, sbot1, sbot2;
    build_side(1, s1, set1, sbot1);
    build_side(2, s2, set2, sbot2);

    auto b1 = oas_vfy_agg(ctx, sbot1, s1, kDefault, oas_agg_pk(set1));
    auto b2 = oas_vfy_agg(ctx, sbot2, s2, kDefault, oas_agg_pk(set2));
    REQUIRE(b1.has_value());
    REQUIRE(b2.has_value());

    std::vector<GroupElement> sbot_union = sbot1;
    sbot_union.insert(sbot_union.end(), sbot2.begin(), sbot2.end());
    std::vector<GroupElement> set_union = set1;
    set_union.insert(set_union.end(), set2.begin(), set2.end());

    auto merged = oas_vfy_agg(ctx, sbot_union, oas_agg(s1, s2), kDefault,
                              oas_agg_pk(set_union));
    REQUIRE(merged.has_value());
    CHECK(*merged == claim_merge(*b1, *b2));
  }
}

TEST_CASE("BLS lifting") {
  PairingContext ctx(kLargePrime);
  Rng rng(93);
  for (int round = 0; round < 100; ++round) {
    KeyPair kp = gen(ctx, rng);
    std::vector<GroupElement> none;

    // case 1: m = M, verifies against apk_M = pk
    Signature on_default = sign(ctx, kDefault, kp.sk);
    OASSignature lifted = lift_bls_to_oas(on_default, kDefault, kDefault, kp.pk);
    auto r1 = oas_vfy_agg(ctx, none, lifted, kDefault, kp.pk);
    REQUIRE(r1.has_value());
    CHECK(r1->empty());

    // case 2: m != M, verifies with apk_M = 1
    std::string m = "lift-" + std::to_string(round);
    Signature dev = sign(ctx, m, kp.sk);
    OASSignature lifted2 = lift_bls_to_oas(dev, m, kDefault, kp.pk);
    auto r2 = oas_vfy_agg(ctx, none, lifted2, kDefault, kp.pk);
    REQUIRE(r2.has_value());
    CHECK(*r2 == ClaimSet::single(m, kp.pk));

    // lifted signatures aggregate with native OAS signatures
    KeyPair other = gen(ctx, rng);
    OASSignature native = oas_sign(ctx, kDefault, kDefault, other);
    OASSignature combined = oas_agg(lifted2, native);
    std::vector<GroupElement> both{kp.pk, other.pk};
    auto r3 = oas_vfy_agg(ctx, none, combined, kDefault, oas_agg_pk(both));
    REQUIRE(r3.has_value());
    CHECK(*r3 == ClaimSet::single(m, kp.pk));
  }
}
