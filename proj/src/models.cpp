#include "aggsig/models.hpp"

#include <algorithm>
#include <stdexcept>

namespace aggsig {

bool is_validation_model(ModelId m) {
  return m == ModelId::V1_NoDishonest || m == ModelId::V2_Dishonest ||
         m == ModelId::V3_RogueKey;
}

std::string model_name(ModelId m) {
  switch (m) {
    case ModelId::V1_NoDishonest: return "v1";
    case ModelId::V2_Dishonest: return "v2";
    case ModelId::V3_RogueKey: return "v3";
    case ModelId::A4_Plain: return "a4";
    case ModelId::A5_Colliding: return "a5";
    case ModelId::A6_RogueKey: return "a6";
  }
  return "?";
}

std::string model_description(ModelId m) {
  switch (m) {
    case ModelId::V1_NoDishonest: return "validation, no non-honest keys";
    case ModelId::V2_Dishonest: return "validation, with non-honest keys";
    case ModelId::V3_RogueKey: return "validation, rogue public key";
    case ModelId::A4_Plain: return "attack-finding, no adversary capabilities";
    case ModelId::A5_Colliding: return "attack-finding, colliding signatures";
    case ModelId::A6_RogueKey: return "attack-finding, rogue public key";
  }
  return "?";
}

std::optional<ModelId> parse_model(const std::string& name) {
  for (ModelId m : kAllModels) {
    if (model_name(m) == name) return m;
  }
  return std::nullopt;
}

void KeyRegistry::register_honest(const std::string& identity, const Term& pk) {
  if (pki_.count(identity)) throw std::invalid_argument("identity already registered");
  if (dishonest_.count(pk)) throw std::invalid_argument("key already dishonest");
  pki_[identity] = pk;
  honest_.insert(pk);
}

void KeyRegistry::register_dishonest(const std::string& identity, const Term& pk) {
  if (pki_.count(identity)) throw std::invalid_argument("identity already registered");
  if (honest_.count(pk)) throw std::invalid_argument("key already honest");
  pki_[identity] = pk;
  dishonest_.insert(pk);
}

void KeyRegistry::register_rogue(const std::string& identity, const Term& rogue_pk,
                                 const Term& target_pk) {
  register_dishonest(identity, rogue_pk);
  rogue_to_target_[rogue_pk] = target_pk;
}

bool KeyRegistry::is_registered(const Term& pk) const {
  return honest_.count(pk) > 0 || dishonest_.count(pk) > 0;
}

bool KeyRegistry::is_honest_identity(const std::string& identity) const {
  auto it = pki_.find(identity);
  // identities without keys (pure protocol roles) count as honest agents
  if (it == pki_.end()) return true;
  return honest_.count(it->second) > 0;
}

std::optional<Term> KeyRegistry::pk_of(const std::string& identity) const {
  auto it = pki_.find(identity);
  if (it == pki_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> KeyRegistry::identity_of(const Term& pk) const {
  for (const auto& [id, key] : pki_) {
    if (key == pk) return id;
  }
  return std::nullopt;
}

std::optional<Term> KeyRegistry::rogue_target(const Term& rogue_pk) const {
  auto it = rogue_to_target_.find(rogue_pk);
  if (it == rogue_to_target_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t KeyRegistry::hash_value() const {
  std::uint64_t h = 0x51afd7ed558ccd6dull;
  auto mix = [&h](std::uint64_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  for (const auto& [id, pk] : pki_) {
    for (char c : id) mix(static_cast<std::uint64_t>(c));
    mix(pk.hash_value());
    mix(honest_.count(pk));
  }
  return h;
}

bool operator==(const VfyPair& a, const VfyPair& b) {
  return a.msg == b.msg && a.pk == b.pk &&
         ((a.index.null() && b.index.null()) ||
          (!a.index.null() && !b.index.null() && a.index == b.index));
}

Term pairs_key(const std::vector<VfyPair>& pairs) {
  std::vector<Term> triples;
  triples.reserve(pairs.size());
  for (const VfyPair& p : pairs) {
    std::vector<Term> parts{p.msg, p.pk};
    if (!p.index.null()) parts.push_back(p.index);
    triples.push_back(Term::tuple(std::move(parts)));
  }
  std::sort(triples.begin(), triples.end(), TermLess{});
  return Term::tuple(std::move(triples));
}

std::optional<bool> VerificationOracle::lookup(const Term& agg, const Term& key) const {
  auto it = memo_.find({agg, key});
  if (it == memo_.end()) return std::nullopt;
  return it->second;
}

bool VerificationOracle::record(const Term& agg, const Term& key, bool value) {
  auto [it, inserted] = memo_.emplace(std::make_pair(agg, key), value);
  return inserted || it->second == value;
}

std::uint64_t VerificationOracle::hash_value() const {
  std::uint64_t h = 0xc2b2ae3d27d4eb4full;
  for (const auto& [k, v] : memo_) {
    h ^= k.first.hash_value() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= k.second.hash_value() + (v ? 0x6a09e667f3bcc909ull : 0xbb67ae8584caa73bull);
  }
  return h;
}

namespace {

// -- attack-finding matching -------------------------------------------

std::vector<std::pair<Term, Term>> stored_pairs(const Term& agg) {
  std::vector<std::pair<Term, Term>> out;
  for (const Term& entry : agg.args()) out.emplace_back(entry.arg(0), entry.arg(1));
  return out;
}

// multiset equality between the query and the aggregate's stored pairs
bool pairs_match(const std::vector<VfyPair>& pairs,
                 std::vector<std::pair<Term, Term>> stored) {
  if (pairs.size() != stored.size()) return false;
  for (const VfyPair& p : pairs) {
    auto it = std::find_if(stored.begin(), stored.end(), [&](const auto& s) {
      return s.first == p.msg && s.second == p.pk;
    });
    if (it == stored.end()) return false;
    stored.erase(it);
  }
  return true;
}

bool attack_finding_true(ModelId model, const Term& agg, const std::vector<VfyPair>& pairs) {
  switch (agg.kind()) {
    case TermKind::ValidAgg:
      return pairs_match(pairs, stored_pairs(agg));
    case TermKind::RogueAgg:
      return model == ModelId::A6_RogueKey && pairs_match(pairs, stored_pairs(agg));
    case TermKind::ZeroAgg: {
      if (model != ModelId::A5_Colliding) return false;
      // the zero-key positions verify with unconstrained messages; the
      // valid core must match exactly
      const Term& core = agg.arg(0);
      std::vector<Term> zero_pks(agg.args().begin() + 1, agg.args().end());
      std::vector<VfyPair> remaining = pairs;
      for (const Term& zpk : zero_pks) {
        auto it = std::find_if(remaining.begin(), remaining.end(),
                               [&](const VfyPair& p) { return p.pk == zpk; });
        if (it == remaining.end()) return false;
        remaining.erase(it);
      }
      return pairs_match(remaining, stored_pairs(core));
    }
    default:
      return false;
  }
}

// -- validation-model restrictions -------------------------------------

struct AlignedEntry {
  Term sig;
  Term index;
  const VfyPair* pair;
};

std::vector<AlignedEntry> align_by_index(const Term& agg, const std::vector<VfyPair>& pairs) {
  if (agg.kind() != TermKind::IndexedAgg)
    throw std::invalid_argument("validation verification expects an agg-shaped term");
  auto entries = agg.args();
  if (entries.size() != pairs.size())
    throw std::invalid_argument("pair count does not match aggregate size");
  std::vector<AlignedEntry> aligned;
  aligned.reserve(entries.size());
  for (const Term& entry : entries) {
    const Term& index = entry.arg(1);
    const VfyPair* found = nullptr;
    for (const VfyPair& p : pairs) {
      if (!p.index.null() && p.index == index) {
        if (found) throw std::invalid_argument("duplicate index in query");
        found = &p;
      }
    }
    if (!found) throw std::invalid_argument("query misses an aggregate index");
    aligned.push_back(AlignedEntry{entry.arg(0), index, found});
  }
  return aligned;
}

bool signature_matches(const Term& sig, const Term& msg, const Term& pk) {
  return sig.kind() == TermKind::Sign && sig.arg(0) == msg &&
         pk.kind() == TermKind::Pk && sig.arg(1) == pk.arg(0);
}

// Rogue aggregates produced by the validation-model adversary rules: every
// rogue position <sign(m, rogueSk(t)), i> claims (m, pk(rogueSk(t))) and
// has a matching target position <sign(m, sk_t), j> claiming (m, t); all
// other positions carry structurally matching signatures.
bool is_forced_rogue_aggregate(const std::vector<AlignedEntry>& aligned) {
  bool any_rogue = false;
  for (const AlignedEntry& e : aligned) {
    if (e.sig.kind() != TermKind::Sign) return false;
    const Term& sk = e.sig.arg(1);
    const Term& msg = e.sig.arg(0);
    if (e.pair->msg != msg) return false;
    if (sk.kind() == TermKind::RogueSk) {
      any_rogue = true;
      if (e.pair->pk != Term::pk(sk)) return false;
      const Term& target_pk = sk.arg(0);
      bool target_present = std::any_of(aligned.begin(), aligned.end(), [&](const AlignedEntry& o) {
        return o.sig.kind() == TermKind::Sign && o.sig.arg(0) == msg &&
               o.pair->pk == target_pk && target_pk.kind() == TermKind::Pk &&
               o.sig.arg(1) == target_pk.arg(0);
      });
      if (!target_present) return false;
    } else {
      if (!signature_matches(e.sig, e.pair->msg, e.pair->pk)) return false;
    }
  }
  return any_rogue;
}

Allowed validation_allowed(ModelId model, const KeyRegistry& registry,
                           const std::vector<AlignedEntry>& aligned) {
  if (model == ModelId::V3_RogueKey && is_forced_rogue_aggregate(aligned)) {
    return Allowed{true, false};
  }
  bool all_honest_matching = true;
  for (const AlignedEntry& e : aligned) {
    bool honest = registry.is_honest(e.pair->pk);
    bool matching = signature_matches(e.sig, e.pair->msg, e.pair->pk);
    if (honest && !matching) {
      // unforgeability: an honest position without the genuine signature
      // can never verify
      return Allowed{false, true};
    }
    if (!honest || !matching) all_honest_matching = false;
  }
  if (all_honest_matching) {
    // correctness: an all-honest matching aggregation must verify
    return Allowed{true, false};
  }
  return Allowed{true, true};
}

}  // namespace

Allowed vfy_symbolic(ModelId model, const VerificationOracle& oracle,
                     const KeyRegistry& registry, const Term& agg,
                     const std::vector<VfyPair>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("empty verification query");
  if (!is_validation_model(model)) {
    bool ok = attack_finding_true(model, agg, pairs);
    return Allowed{ok, !ok};
  }
  std::vector<AlignedEntry> aligned = align_by_index(agg, pairs);
  if (auto hit = oracle.lookup(agg, pairs_key(pairs))) {
    // consistency: a repeated query returns the memoized verdict
    return Allowed{*hit, !*hit};
  }
  return validation_allowed(model, registry, aligned);
}

std::set<AdvRule> adversary_rules(ModelId m) {
  std::set<AdvRule> rules{AdvRule::AggregateValid, AdvRule::ExtendAgg};
  switch (m) {
    case ModelId::V1_NoDishonest:
    case ModelId::A4_Plain:
      break;
    case ModelId::V2_Dishonest:
      rules.insert(AdvRule::RegisterDishonest);
      break;
    case ModelId::V3_RogueKey:
      rules.insert(AdvRule::RegisterDishonest);
      rules.insert(AdvRule::RegisterRogue);
      rules.insert(AdvRule::RogueAggregate);
      break;
    case ModelId::A5_Colliding:
      rules.insert(AdvRule::RegisterDishonest);
      rules.insert(AdvRule::ZeroAggregate);
      break;
    case ModelId::A6_RogueKey:
      rules.insert(AdvRule::RegisterDishonest);
      rules.insert(AdvRule::RegisterRogue);
      rules.insert(AdvRule::RogueAggregate);
      break;
  }
  return rules;
}

}  // namespace aggsig
