// Signer/aggregator/verifier example protocol: signers sign fresh
// messages, an aggregator bundles up to max_agg_size of them, the
// verifier resolves the claimed signer keys in the PKI and queries the
// active aggregate-signature theory. The signer deliberately does not
// name a verifier in its run claim.
#include <algorithm>

#include "aggsig/protocols.hpp"

namespace aggsig {

namespace {

const char* kSigTag = "sig";
const char* kAggTag = "aggmsg";

class ToyProtocol final : public Protocol {
 public:
  explicit ToyProtocol(ScenarioSpec spec) : spec_(std::move(spec)) {}

  std::string name() const override { return "toy"; }

  void setup(ExploreState& state) const override {
    for (const RoleSpec& r : spec_.roles) {
      if (r.role == "signer") {
        Term sk = Term::nonce("sk" + r.identity);
        Term pk = Term::pk(sk);
        state.registry.register_honest(r.identity, pk);
        state.knowledge.add(pk);
        TraceEvent e;
        e.actor = "setup";
        e.kind = EventKind::RegisterHonest;
        e.term = pk;
        state.emit(std::move(e));
      }
      for (int s = 0; s < r.sessions; ++s) {
        state.sessions.push_back(RoleSession{r.role, r.identity, s, 0, {}});
      }
    }
  }

  std::vector<Term> message_pool(const ExploreState& state) const override {
    (void)state;
    // content of adversary-made signatures; claims range separately over
    // the substitute pool, so one constant suffices here
    return {Term::public_name("advm0")};
  }

  std::vector<Action> role_actions(const ExploreState& state, int session_idx,
                                   const Bounds& bounds) const override {
    const RoleSession& s = state.sessions[session_idx];
    if (s.pc != 0) return {};
    if (s.role == "signer") {
      Action a;
      a.session = session_idx;
      a.step = "sign";
      return {a};
    }
    if (s.role == "aggregator") return aggregator_actions(state, session_idx, bounds);
    if (s.role == "verifier") return verifier_actions(state, session_idx, bounds);
    return {};
  }

  bool apply_role(ExploreState& state, const Action& action,
                  const Bounds& bounds) const override {
    RoleSession& s = state.sessions[action.session];
    if (s.pc != 0) return false;
    if (s.role == "signer" && action.step == "sign") return apply_sign(state, action);
    if (s.role == "aggregator" && action.step == "aggregate")
      return apply_aggregate(state, action, bounds);
    if (s.role == "verifier" && action.step == "verify")
      return apply_verify(state, action, bounds);
    return false;
  }

 private:
  // valid signature bundles the aggregator would accept
  std::vector<Term> known_bundles(const ExploreState& state) const {
    std::set<Term, TermLess> bundles;
    for (const Term& t : state.knowledge.closure()) {
      if (t.kind() != TermKind::Tuple || t.arity() != 4) continue;
      if (t.arg(0) != Term::public_name(kSigTag)) continue;
      if (bundle_valid(state, t)) bundles.insert(t);
    }
    // bundles the adversary can assemble under keys it controls
    for (const Term& pk : state.registry.dishonest()) {
      if (pk.kind() != TermKind::Pk || pk.arg(0).kind() == TermKind::RogueSk) continue;
      if (!state.knowledge.can_derive(pk.arg(0), 1)) continue;
      auto id = state.registry.identity_of(pk);
      if (!id) continue;
      for (const Term& m : message_pool(state)) {
        bundles.insert(Term::tuple({Term::public_name(kSigTag), Term::public_name(*id), m,
                                    Term::sign(m, pk.arg(0))}));
      }
    }
    return {bundles.begin(), bundles.end()};
  }

  bool bundle_valid(const ExploreState& state, const Term& bundle) const {
    const Term& id = bundle.arg(1);
    const Term& m = bundle.arg(2);
    const Term& sig = bundle.arg(3);
    if (id.kind() != TermKind::PublicName || sig.kind() != TermKind::Sign) return false;
    auto pk = state.registry.pk_of(id.label());
    if (!pk) return false;
    return sig.arg(0) == m && *pk == Term::pk(sig.arg(1));
  }

  std::vector<Action> aggregator_actions(const ExploreState& state, int session_idx,
                                         const Bounds& bounds) const {
    std::vector<Term> bundles = known_bundles(state);
    std::vector<Action> out;
    if (bundles.empty() || bundles.size() > 16) return out;
    for (std::uint32_t mask = 1; mask < (1u << bundles.size()); ++mask) {
      if (__builtin_popcount(mask) > bounds.max_agg_size) continue;
      Action a;
      a.session = session_idx;
      a.step = "aggregate";
      for (std::size_t i = 0; i < bundles.size(); ++i) {
        if (mask & (1u << i)) a.args.push_back(bundles[i]);
      }
      out.push_back(std::move(a));
    }
    return out;
  }

  bool apply_aggregate(ExploreState& state, const Action& action,
                       const Bounds& bounds) const {
    RoleSession& s = state.sessions[action.session];
    if (action.args.empty() || static_cast<int>(action.args.size()) > bounds.max_agg_size)
      return false;
    for (const Term& b : action.args) {
      if (!bundle_valid(state, b)) return false;
      if (!state.knowledge.can_derive(b, bounds.deduction_depth)) return false;
    }
    std::string actor = s.actor();
    bool validation = is_validation_model(state.model);
    std::vector<std::pair<Term, Term>> entries;  // validation
    std::vector<std::pair<Term, Term>> pairs;    // attack-finding
    std::vector<Term> claims;
    for (std::size_t i = 0; i < action.args.size(); ++i) {
      const Term& b = action.args[i];
      TraceEvent recv;
      recv.actor = actor;
      recv.kind = EventKind::Recv;
      recv.term = b;
      state.emit(std::move(recv));
      const Term& id = b.arg(1);
      const Term& m = b.arg(2);
      const Term& sig = b.arg(3);
      if (validation) {
        Term index = state.fresh_index(s.identity + std::to_string(s.session) + "." +
                                       std::to_string(i));
        entries.emplace_back(sig, index);
        claims.push_back(Term::tuple({m, id, index}));
        state.knowledge.add(index);
      } else {
        pairs.emplace_back(m, Term::pk(sig.arg(1)));
        claims.push_back(Term::tuple({m, id}));
      }
    }
    Term agg = validation ? Term::indexed_agg(std::move(entries))
                          : Term::valid_agg(std::move(pairs));
    state.send_from(actor, Term::tuple({Term::public_name(kAggTag), agg,
                                        Term::tuple(std::move(claims))}));
    s.pc = 1;
    return true;
  }

  // Claim vectors that can verify under the active theory. Rejecting
  // queries are not enumerated: a false verdict aborts the session and
  // contributes no claim event any lemma looks at.
  std::vector<Action> verifier_actions(const ExploreState& state, int session_idx,
                                       const Bounds& bounds) const {
    std::vector<Action> out;
    for (const AggOption& opt : constructible_aggregates(state, *this, bounds)) {
      if (opt.cost > state.adv_agg_budget) continue;
      for (auto& [pairs, claims] : accepting_queries(state, opt.agg)) {
        Allowed allowed =
            vfy_symbolic(state.model, state.oracle, state.registry, opt.agg, pairs);
        if (!allowed.can_true) continue;
        Action a;
        a.session = session_idx;
        a.step = "verify";
        a.args = {opt.agg, claims};
        out.push_back(std::move(a));
      }
    }
    return out;
  }

  using Query = std::pair<std::vector<VfyPair>, Term>;

  std::vector<Query> accepting_queries(const ExploreState& state, const Term& aggterm) const {
    // two substitute messages besides the signed one exhibit every
    // lemma-visible behavior of an oracle-free position (one to diverge
    // from the signature, two to diverge between two verifications)
    std::vector<Term> pool{Term::public_name("advm0"), Term::public_name("advm1")};
    std::vector<Query> out;
    bool validation = is_validation_model(state.model);
    if (validation) {
      if (aggterm.kind() != TermKind::IndexedAgg) return out;
      // per-entry claim options: honest keys are pinned to the signed
      // message, adversary-held keys range over the message pool
      std::vector<std::vector<Term>> options;  // claim tuples per entry
      for (const Term& entry : aggterm.args()) {
        const Term& sig = entry.arg(0);
        const Term& index = entry.arg(1);
        if (sig.kind() != TermKind::Sign) return {};
        Term pk = Term::pk(sig.arg(1));
        auto id = state.registry.identity_of(pk);
        if (!id) return {};
        std::vector<Term> opts;
        Term id_term = Term::public_name(*id);
        if (state.registry.is_honest(pk)) {
          opts.push_back(Term::tuple({sig.arg(0), id_term, index}));
        } else {
          std::set<Term, TermLess> msgs(pool.begin(), pool.end());
          msgs.insert(sig.arg(0));
          for (const Term& m : msgs) opts.push_back(Term::tuple({m, id_term, index}));
        }
        options.push_back(std::move(opts));
      }
      std::vector<Term> current(options.size());
      expand(options, 0, current, out, state);
      return out;
    }
    switch (aggterm.kind()) {
      case TermKind::ValidAgg:
      case TermKind::RogueAgg: {
        if (aggterm.kind() == TermKind::RogueAgg && state.model != ModelId::A6_RogueKey)
          return out;
        std::vector<Term> claims;
        std::vector<VfyPair> pairs;
        for (const Term& entry : aggterm.args()) {
          auto id = state.registry.identity_of(entry.arg(1));
          if (!id) return {};
          claims.push_back(Term::tuple({entry.arg(0), Term::public_name(*id)}));
          pairs.push_back(VfyPair{entry.arg(0), entry.arg(1), Term()});
        }
        out.emplace_back(std::move(pairs), Term::tuple(std::move(claims)));
        return out;
      }
      case TermKind::ZeroAgg: {
        if (state.model != ModelId::A5_Colliding) return out;
        const Term& core = aggterm.arg(0);
        std::vector<Term> zero_pks(aggterm.args().begin() + 1, aggterm.args().end());
        std::vector<std::vector<Term>> options;  // claim tuples per position
        std::vector<Term> fixed_claims;
        std::vector<VfyPair> fixed_pairs;
        for (const Term& entry : core.args()) {
          auto id = state.registry.identity_of(entry.arg(1));
          if (!id) return {};
          fixed_claims.push_back(Term::tuple({entry.arg(0), Term::public_name(*id)}));
          fixed_pairs.push_back(VfyPair{entry.arg(0), entry.arg(1), Term()});
        }
        // zero positions verify for any message
        std::vector<std::vector<Term>> zero_opts;
        for (const Term& zpk : zero_pks) {
          auto id = state.registry.identity_of(zpk);
          if (!id) return {};
          std::vector<Term> opts;
          for (const Term& m : pool) {
            opts.push_back(Term::tuple({m, Term::public_name(*id)}));
          }
          zero_opts.push_back(std::move(opts));
        }
        std::vector<std::size_t> idx(zero_opts.size(), 0);
        while (true) {
          std::vector<Term> claims = fixed_claims;
          std::vector<VfyPair> pairs = fixed_pairs;
          for (std::size_t i = 0; i < zero_opts.size(); ++i) {
            const Term& claim = zero_opts[i][idx[i]];
            claims.push_back(claim);
            pairs.push_back(VfyPair{claim.arg(0), zero_pks[i], Term()});
          }
          out.emplace_back(std::move(pairs), Term::tuple(std::move(claims)));
          std::size_t k = 0;
          while (k < idx.size() && ++idx[k] == zero_opts[k].size()) idx[k++] = 0;
          if (k == idx.size()) break;
        }
        return out;
      }
      default:
        return out;
    }
  }

  void expand(const std::vector<std::vector<Term>>& options, std::size_t at,
              std::vector<Term>& current, std::vector<Query>& out,
              const ExploreState& state) const {
    if (at == options.size()) {
      std::vector<VfyPair> pairs;
      for (const Term& claim : current) {
        auto pk = state.registry.pk_of(claim.arg(1).label());
        pairs.push_back(VfyPair{claim.arg(0), *pk, claim.arg(2)});
      }
      out.emplace_back(std::move(pairs), Term::tuple(current));
      return;
    }
    for (const Term& opt : options[at]) {
      current[at] = opt;
      expand(options, at + 1, current, out, state);
    }
  }

  bool apply_sign(ExploreState& state, const Action& action) const {
    RoleSession& s = state.sessions[action.session];
    Term m = Term::nonce("m" + s.identity + (s.session ? std::to_string(s.session) : ""));
    auto pk = state.registry.pk_of(s.identity);
    if (!pk) return false;
    Term sk = pk->arg(0);
    Term sig = Term::sign(m, sk);
    std::string actor = s.actor();

    TraceEvent signed_evt;
    signed_evt.actor = actor;
    signed_evt.kind = EventKind::Sign;
    signed_evt.term = m;
    signed_evt.aux = *pk;
    state.emit(std::move(signed_evt));

    TraceEvent running;
    running.actor = actor;
    running.kind = EventKind::Running;
    running.claimant = s.identity;
    running.partner = "";  // the signer does not know its verifier
    running.payload = Term::tuple({Term::public_name("msg"), m});
    state.emit(std::move(running));

    state.send_from(actor, Term::tuple({Term::public_name(kSigTag),
                                        Term::public_name(s.identity), m, sig}));
    s.pc = 1;
    return true;
  }

  bool apply_verify(ExploreState& state, const Action& action, const Bounds& bounds) const {
    if (action.args.size() != 2) return false;
    RoleSession& s = state.sessions[action.session];
    const Term& aggterm = action.args[0];
    const Term& claims = action.args[1];
    if (!deliver_aggregate(state, *this, bounds, aggterm)) return false;
    std::vector<VfyPair> pairs;
    for (const Term& claim : claims.args()) {
      auto pk = state.registry.pk_of(claim.arg(1).label());
      if (!pk) return false;
      pairs.push_back(
          VfyPair{claim.arg(0), *pk, claim.arity() == 3 ? claim.arg(2) : Term()});
    }
    Allowed allowed = vfy_symbolic(state.model, state.oracle, state.registry, aggterm, pairs);
    if (!allowed.can_true) return false;
    std::string actor = s.actor();
    Term msg = Term::tuple({Term::public_name(kAggTag), aggterm, claims});
    if (!state.knowledge.can_derive(msg, bounds.deduction_depth)) return false;
    TraceEvent recv;
    recv.actor = actor;
    recv.kind = EventKind::Recv;
    recv.term = msg;
    state.emit(std::move(recv));
    state.record_vfy(actor, aggterm, pairs, true);
    for (const Term& claim : claims.args()) {
      TraceEvent commit;
      commit.actor = actor;
      commit.kind = EventKind::Commit;
      commit.claimant = s.identity;
      commit.partner = claim.arg(1).label();
      commit.payload = Term::tuple({Term::public_name("msg"), claim.arg(0)});
      state.emit(std::move(commit));
    }
    s.pc = 1;
    return true;
  }

  ScenarioSpec spec_;
};

}  // namespace

std::unique_ptr<Protocol> make_toy_protocol(ScenarioSpec spec) {
  return std::make_unique<ToyProtocol>(std::move(spec));
}

ScenarioSpec toy_scenario() {
  ScenarioSpec spec;
  spec.name = "toy";
  spec.protocol = ProtocolKind::Toy;
  spec.roles = {
      {"signer", "S1", 1},
      {"signer", "S2", 1},
      {"aggregator", "AG", 1},
      {"verifier", "V", 2},
  };
  spec.bounds = Bounds{};
  return spec;
}

std::vector<Lemma> toy_lemmas() {
  return {
      Lemma::message_authenticity(),
      Lemma::weak_agreement("verifier"),
      Lemma::no_splitting_zero(),
      Lemma::no_rogue_key("verifier"),
  };
}

}  // namespace aggsig
