// The six aggregate-signature theories.
//
// Validation models treat verification as an adversary-controlled oracle
// constrained by three restrictions: correctness (all-honest matching
// aggregates must verify), unforgeability (a true verdict requires every
// honest position to carry the genuine signature), and consistency (the
// oracle is a function of its inputs). Attack-finding models define
// verification equationally: only explicitly modeled shapes verify.
//
//   v1  validation, no non-honest key registration
//   v2  validation plus non-honest keys
//   v3  validation plus rogue public keys
//   a4  attack-finding, no adversary capabilities
//   a5  attack-finding plus colliding signatures
//   a6  attack-finding plus rogue public keys
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aggsig/term.hpp"

namespace aggsig {

enum class ModelId {
  V1_NoDishonest,
  V2_Dishonest,
  V3_RogueKey,
  A4_Plain,
  A5_Colliding,
  A6_RogueKey,
};

inline constexpr ModelId kAllModels[] = {
    ModelId::V1_NoDishonest, ModelId::V2_Dishonest, ModelId::V3_RogueKey,
    ModelId::A4_Plain,       ModelId::A5_Colliding, ModelId::A6_RogueKey,
};

bool is_validation_model(ModelId m);
std::string model_name(ModelId m);        // "v1" .. "a6"
std::string model_description(ModelId m);
std::optional<ModelId> parse_model(const std::string& name);

// PKI and honesty bookkeeping. Honest keys are fixed at scenario setup;
// dishonest and rogue keys arrive through adversary rules.
class KeyRegistry {
 public:
  void register_honest(const std::string& identity, const Term& pk);
  void register_dishonest(const std::string& identity, const Term& pk);
  void register_rogue(const std::string& identity, const Term& rogue_pk, const Term& target_pk);

  bool is_registered(const Term& pk) const;
  bool is_honest(const Term& pk) const { return honest_.count(pk) > 0; }
  bool is_dishonest(const Term& pk) const { return dishonest_.count(pk) > 0; }
  bool is_honest_identity(const std::string& identity) const;
  std::optional<Term> pk_of(const std::string& identity) const;
  std::optional<std::string> identity_of(const Term& pk) const;
  std::optional<Term> rogue_target(const Term& rogue_pk) const;

  const std::map<std::string, Term>& pki() const { return pki_; }
  const std::set<Term, TermLess>& honest() const { return honest_; }
  const std::set<Term, TermLess>& dishonest() const { return dishonest_; }

  std::uint64_t hash_value() const;

 private:
  std::map<std::string, Term> pki_;
  std::set<Term, TermLess> honest_;
  std::set<Term, TermLess> dishonest_;
  std::map<Term, Term, TermLess> rogue_to_target_;
};

// One verification position: message, public key, and (validation models
// only) the entry index inside the aggregate.
struct VfyPair {
  Term msg;
  Term pk;
  Term index;  // null for attack-finding models
};

bool operator==(const VfyPair& a, const VfyPair& b);

// Canonical multiset encoding of a pair list, used as oracle key and in
// trace events.
Term pairs_key(const std::vector<VfyPair>& pairs);

// Which verification results the active theory admits for a query.
struct Allowed {
  bool can_true = false;
  bool can_false = false;
  bool branching() const { return can_true && can_false; }
  bool singleton() const { return can_true != can_false; }
};

// Per-branch memo of oracle answers; consistency says a key never remaps.
class VerificationOracle {
 public:
  std::optional<bool> lookup(const Term& agg, const Term& key) const;
  // Returns false if the key was already bound to a different value.
  bool record(const Term& agg, const Term& key, bool value);
  std::uint64_t hash_value() const;
  std::size_t size() const { return memo_.size(); }

 private:
  std::map<std::pair<Term, Term>, bool> memo_;
};

// The allowed verdict set for verifying `agg` against `pairs` under the
// given model. Throws std::invalid_argument on malformed queries
// (index misalignment, non-aggregate term in a validation model).
Allowed vfy_symbolic(ModelId model, const VerificationOracle& oracle,
                     const KeyRegistry& registry, const Term& agg,
                     const std::vector<VfyPair>& pairs);

// Adversary capabilities per model, applied by the explorer.
enum class AdvRule {
  AggregateValid,      // aggregate known valid signatures
  ExtendAgg,           // add one known signature to an existing aggregate
  RegisterDishonest,   // register an adversary-chosen key in the PKI
  RegisterRogue,       // register a rogue public key for an honest target
  RogueAggregate,      // emit the two-position rogue aggregate
  ZeroAggregate,       // emit a colliding aggregate over registered keys
};

std::set<AdvRule> adversary_rules(ModelId m);

}  // namespace aggsig
