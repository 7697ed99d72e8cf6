// SANA role machines. Token Request: a verifier obtains a signed
// authorization token and the aggregate public key from the network
// owner over a four-message exchange. Attestation: the verifier
// broadcasts a challenge, provers validate the token against their
// pre-installed owner key and sign h|N|c, aggregators merge the
// responses, and the verifier checks the aggregate against the apk it
// received in Token Request.
//
// The same class implements the Token Request subprotocol in isolation
// (no provers or aggregators) and the complete protocol.
#include <algorithm>

#include "aggsig/protocols.hpp"

namespace aggsig {

namespace {

Term tag(std::string t) { return Term::public_name(std::move(t)); }

// public protocol constants: the approved software hash set, the token
// counter and expiry, the prover measurement, an adversary scratch atom
Term hw_set() { return tag("goodhw"); }
Term counter_c() { return tag("c0"); }
Term expiry_t() { return tag("t0"); }
Term good_hash() { return tag("hgood"); }
Term adv_atom() { return tag("xA"); }

Term token_body(const Term& sig_owner) {
  return Term::tuple({tag("token"), hw_set(), counter_c(), expiry_t(), sig_owner});
}

Term cert_term(const std::string& id, const Term& pk) {
  return Term::tuple({tag("cert"), Term::public_name(id), pk});
}

class SanaProtocol final : public Protocol {
 public:
  explicit SanaProtocol(ScenarioSpec spec) : spec_(std::move(spec)) {
    full_ = spec_.protocol == ProtocolKind::SanaFull;
    for (const RoleSpec& r : spec_.roles) {
      if (r.role == "owner" && intended_owner_.empty()) intended_owner_ = r.identity;
      if (r.role == "verifier" && attester_.empty()) attester_ = r.identity;
      if (r.role == "prover") provers_.push_back(r.identity);
    }
  }

  std::string name() const override { return full_ ? "sana" : "token-request"; }

  bool allow_dishonest_registration() const override {
    return spec_.toggles.dishonest_keys_in_apk;
  }
  bool allow_rogue_registration() const override {
    return spec_.toggles.rogue_registration;
  }

  void setup(ExploreState& state) const override {
    auto add_key = [&state](const std::string& id, bool honest) {
      Term sk = Term::nonce("sk" + id);
      Term pk = Term::pk(sk);
      if (honest) {
        state.registry.register_honest(id, pk);
      } else {
        state.registry.register_dishonest(id, pk);
        state.knowledge.add(sk);
      }
      state.knowledge.add(pk);
      state.knowledge.add(cert_term(id, pk));
      TraceEvent e;
      e.actor = "setup";
      e.kind = honest ? EventKind::RegisterHonest : EventKind::RegisterDishonest;
      e.term = pk;
      state.emit(std::move(e));
    };
    for (const RoleSpec& r : spec_.roles) {
      if (r.role != "aggregator") add_key(r.identity, true);
      for (int s = 0; s < r.sessions; ++s) {
        state.sessions.push_back(RoleSession{r.role, r.identity, s, 0, {}});
      }
    }
    for (const std::string& id : spec_.compromised) add_key(id, false);
  }

  std::vector<Term> message_pool(const ExploreState& state) const override {
    // contents for adversary-made signatures and rogue aggregations; only
    // response-shaped payloads can pass any verification here
    std::set<Term, TermLess> pool;
    if (full_) {
      for (const Term& n : closure_nonces(state, "ch.")) {
        pool.insert(Term::tuple({good_hash(), n, counter_c()}));
      }
    }
    return {pool.begin(), pool.end()};
  }

  std::vector<Term> rogue_targets(const ExploreState& state) const override {
    // rogue keys target attestation: the prover keys
    std::vector<Term> out;
    for (const std::string& p : provers_) {
      if (auto pk = state.registry.pk_of(p)) out.push_back(*pk);
    }
    return out;
  }

  std::vector<Action> role_actions(const ExploreState& state, int session_idx,
                                   const Bounds& bounds) const override {
    const RoleSession& s = state.sessions[session_idx];
    if (s.role == "verifier") return verifier_actions(state, session_idx, bounds);
    if (s.role == "owner") return owner_actions(state, session_idx, bounds);
    if (s.role == "prover") return prover_actions(state, session_idx, bounds);
    if (s.role == "aggregator") return aggregator_actions(state, session_idx, bounds);
    return {};
  }

  bool apply_role(ExploreState& state, const Action& action,
                  const Bounds& bounds) const override {
    const RoleSession& s = state.sessions[action.session];
    if (s.role == "verifier") {
      if (action.step == "v-start") return apply_v_start(state, action);
      if (action.step == "v-sign") return apply_v_sign(state, action, bounds);
      if (action.step == "v-finish") return apply_v_finish(state, action, bounds);
      if (action.step == "v-attest") return apply_v_attest(state, action, bounds);
    } else if (s.role == "owner") {
      if (action.step == "o-start") return apply_o_start(state, action, bounds);
      if (action.step == "o-issue") return apply_o_issue(state, action, bounds);
    } else if (s.role == "prover") {
      if (action.step == "p-respond") return apply_p_respond(state, action, bounds);
    } else if (s.role == "aggregator") {
      if (action.step == "ag-forward") return apply_ag_forward(state, action, bounds);
      if (action.step == "ag-collect") return apply_ag_collect(state, action, bounds);
    }
    return false;
  }

 private:
  // -- pools ------------------------------------------------------------

  std::vector<Term> closure_nonces(const ExploreState& state,
                                   const std::string& prefix = "") const {
    std::vector<Term> out;
    for (const Term& t : state.knowledge.closure()) {
      if (t.kind() != TermKind::Nonce) continue;
      if (!prefix.empty() && t.label().rfind(prefix, 0) != 0) continue;
      out.push_back(t);
    }
    return out;
  }

  std::vector<Term> apk_candidates(const ExploreState& state) const {
    std::set<Term, TermLess> out{Term::tuple({tag("apk"), tag("apkAdv")})};
    for (const Term& t : state.knowledge.closure()) {
      if (t.kind() == TermKind::Tuple && t.arity() >= 2 && t.arg(0) == tag("apk")) {
        out.insert(t);
      }
    }
    if (full_) {
      // fake single-key apks; only verifier keys add anything, since the
      // token-request oracle is the only signature source outside the apk
      for (const RoleSpec& r : spec_.roles) {
        if (r.role != "verifier") continue;
        if (auto pk = state.registry.pk_of(r.identity)) {
          out.insert(Term::tuple({tag("apk"), *pk}));
        }
      }
    }
    return {out.begin(), out.end()};
  }

  // Terms an adversary might feed a party that signs its input. The pool
  // is shaped by what any receiver in the protocol would later check:
  // owner nonces (message-3 signatures), verifier nonces paired with an
  // apk (message-4 signatures), token bodies, and challenge payloads.
  // Everything else produces a signature no role can consume.
  std::vector<Term> oracle_input_pool(const ExploreState& state) const {
    std::set<Term, TermLess> pool{adv_atom()};
    for (const Term& n : closure_nonces(state, "no.")) pool.insert(n);
    pool.insert(Term::tuple({hw_set(), counter_c(), expiry_t()}));  // token body
    for (const Term& n : closure_nonces(state, "nv.")) {
      for (const Term& apk : apk_candidates(state)) {
        pool.insert(Term::tuple({n, apk}));  // nonce|apk pair
      }
    }
    if (full_) {
      for (const Term& n : closure_nonces(state, "ch.")) {
        pool.insert(Term::tuple({good_hash(), n, counter_c()}));  // response payload
      }
    }
    return {pool.begin(), pool.end()};
  }

  Term owner_apk(const ExploreState& state, const std::string& owner_id) const {
    std::vector<Term> keys;
    if (full_) {
      for (const std::string& p : provers_) {
        if (auto pk = state.registry.pk_of(p)) keys.push_back(*pk);
      }
      if (spec_.toggles.dishonest_keys_in_apk) {
        for (const Term& pk : state.registry.dishonest()) keys.push_back(pk);
      }
      std::sort(keys.begin(), keys.end(), TermLess{});
    } else {
      keys.push_back(tag("devices" + owner_id));
    }
    std::vector<Term> args{tag("apk")};
    args.insert(args.end(), keys.begin(), keys.end());
    return Term::tuple(std::move(args));
  }

  bool apk_member(const Term& apk, const Term& pk) const {
    if (apk.kind() != TermKind::Tuple || apk.arity() < 2 || apk.arg(0) != tag("apk"))
      return false;
    for (std::size_t i = 1; i < apk.arity(); ++i) {
      if (apk.arg(i) == pk) return true;
    }
    return false;
  }

  Term sk_of(const ExploreState& state, const std::string& id) const {
    auto pk = state.registry.pk_of(id);
    return pk->arg(0);
  }

  // -- verifier ----------------------------------------------------------

  std::vector<Action> verifier_actions(const ExploreState& state, int session_idx,
                                       const Bounds& bounds) const {
    const RoleSession& s = state.sessions[session_idx];
    std::vector<Action> out;
    if (s.pc == 0) {
      Action a;
      a.session = session_idx;
      a.step = "v-start";
      out.push_back(std::move(a));
    } else if (s.pc == 1) {
      for (const Term& x : oracle_input_pool(state)) {
        Action a;
        a.session = session_idx;
        a.step = "v-sign";
        a.args = {x};
        out.push_back(std::move(a));
      }
    } else if (s.pc == 2) {
      out = v_finish_actions(state, session_idx);
    } else if (s.pc == 3 && full_ && s.identity == attester_) {
      out = v_attest_actions(state, session_idx, bounds);
    }
    return out;
  }

  bool apply_v_start(ExploreState& state, const Action& action) const {
    RoleSession& s = state.sessions[action.session];
    if (s.pc != 0) return false;
    Term nv = Term::nonce("nv." + s.identity + "." + std::to_string(s.session));
    s.store["nv"] = nv;
    if (spec_.toggles.verifier_init == ScenarioToggles::VerifierInit::OwnerIdentity) {
      TraceEvent running;
      running.actor = s.actor();
      running.kind = EventKind::Running;
      running.claimant = s.identity;
      running.partner = intended_owner_;
      running.payload = Term::tuple({tag("tr-run"), nv});
      state.emit(std::move(running));
    }
    state.send_from(s.actor(), nv);
    s.pc = 1;
    return true;
  }

  bool apply_v_sign(ExploreState& state, const Action& action, const Bounds& bounds) const {
    RoleSession& s = state.sessions[action.session];
    if (s.pc != 1 || action.args.size() != 1) return false;
    const Term& x = action.args[0];
    if (!state.knowledge.can_derive(x, bounds.deduction_depth)) return false;
    TraceEvent recv;
    recv.actor = s.actor();
    recv.kind = EventKind::Recv;
    recv.term = x;
    state.emit(std::move(recv));
    Term sig = Term::sign(x, sk_of(state, s.identity));
    auto pk = state.registry.pk_of(s.identity);
    state.send_from(s.actor(), Term::tuple({tag("tr3"), sig, cert_term(s.identity, *pk)}));
    s.pc = 2;
    return true;
  }

  std::vector<Action> v_finish_actions(const ExploreState& state, int session_idx) const {
    const RoleSession& s = state.sessions[session_idx];
    std::vector<Action> out;
    const Term nv = s.store.at("nv");
    auto my_pk = state.registry.pk_of(s.identity);
    bool require_intended =
        spec_.toggles.verifier_init == ScenarioToggles::VerifierInit::OwnerIdentity;
    // candidates keyed by the apk signature: sign(<nv, apk>, sk_s)
    for (const Term& sig_ok : state.knowledge.closure()) {
      if (sig_ok.kind() != TermKind::Sign) continue;
      const Term& body = sig_ok.arg(0);
      if (body.kind() != TermKind::Tuple || body.arity() != 2) continue;
      if (!(body.arg(0) == nv)) continue;
      Term signer_pk = Term::pk(sig_ok.arg(1));
      auto signer_id = state.registry.identity_of(signer_pk);
      if (!signer_id) continue;
      if (require_intended && *signer_id != intended_owner_) continue;
      const Term& apk = body.arg(1);
      // token signed by the same party, either already encrypted to us or
      // rebuildable by the adversary from a known token signature
      for (const Term& t : state.knowledge.closure()) {
        if (t.kind() == TermKind::Sign) {
          const Term& tb = t.arg(0);
          if (tb.kind() != TermKind::Tuple || tb.arity() != 3) continue;
          if (!(t.arg(1) == sig_ok.arg(1))) continue;
          Term token = token_body(t);
          if (!state.knowledge.can_derive(Term::enc(token, *my_pk), 4)) continue;
          Action a;
          a.session = session_idx;
          a.step = "v-finish";
          a.args = {token, apk, sig_ok, Term::public_name(*signer_id)};
          out.push_back(std::move(a));
        } else if (t.kind() == TermKind::Enc && t.arg(1) == *my_pk) {
          const Term& token = t.arg(0);
          if (!token_valid(token, sig_ok.arg(1))) continue;
          Action a;
          a.session = session_idx;
          a.step = "v-finish";
          a.args = {token, apk, sig_ok, Term::public_name(*signer_id)};
          out.push_back(std::move(a));
        }
      }
    }
    // dedup identical candidates from the two sources
    std::vector<Action> uniq;
    for (Action& a : out) {
      bool seen = std::any_of(uniq.begin(), uniq.end(), [&](const Action& u) { return u == a; });
      if (!seen) uniq.push_back(std::move(a));
    }
    return uniq;
  }

  bool token_valid(const Term& token, const Term& signer_sk) const {
    if (token.kind() != TermKind::Tuple || token.arity() != 5) return false;
    if (!(token.arg(0) == tag("token"))) return false;
    const Term& sig = token.arg(4);
    if (sig.kind() != TermKind::Sign) return false;
    if (!(sig.arg(1) == signer_sk)) return false;
    return sig.arg(0) == Term::tuple({token.arg(1), token.arg(2), token.arg(3)});
  }

  bool apply_v_finish(ExploreState& state, const Action& action, const Bounds& bounds) const {
    RoleSession& s = state.sessions[action.session];
    if (s.pc != 2 || action.args.size() != 4) return false;
    const Term& token = action.args[0];
    const Term& apk = action.args[1];
    const Term& sig_ok = action.args[2];
    const std::string owner_id = action.args[3].label();
    const Term nv = s.store.at("nv");
    auto owner_pk = state.registry.pk_of(owner_id);
    if (!owner_pk) return false;
    if (spec_.toggles.verifier_init == ScenarioToggles::VerifierInit::OwnerIdentity &&
        owner_id != intended_owner_)
      return false;
    // signature over our nonce and the claimed apk, by the certified key
    if (!(sig_ok == Term::sign(Term::tuple({nv, apk}), owner_pk->arg(0)))) return false;
    if (!token_valid(token, owner_pk->arg(0))) return false;
    auto my_pk = state.registry.pk_of(s.identity);
    Term enc = Term::enc(token, *my_pk);
    if (!state.knowledge.can_derive(sig_ok, bounds.deduction_depth)) return false;
    if (!state.knowledge.can_derive(enc, bounds.deduction_depth)) return false;
    Term msg4 = Term::tuple({tag("tr4"), enc, apk, sig_ok,
                             cert_term(owner_id, *owner_pk)});
    TraceEvent recv;
    recv.actor = s.actor();
    recv.kind = EventKind::Recv;
    recv.term = msg4;
    state.emit(std::move(recv));
    if (spec_.toggles.verifier_init == ScenarioToggles::VerifierInit::None) {
      TraceEvent running;
      running.actor = s.actor();
      running.kind = EventKind::Running;
      running.claimant = s.identity;
      running.partner = owner_id;
      running.payload = Term::tuple({tag("tr-run"), nv});
      state.emit(std::move(running));
    }
    TraceEvent commit;
    commit.actor = s.actor();
    commit.kind = EventKind::Commit;
    commit.claimant = s.identity;
    commit.partner = owner_id;
    commit.payload = Term::tuple({tag("tr-done"), token, apk});
    state.emit(std::move(commit));
    s.store["token"] = token;
    s.store["apk"] = apk;
    if (full_ && s.identity == attester_) {
      Term n = Term::nonce("ch." + s.identity + "." + std::to_string(s.session));
      s.store["n"] = n;
      state.send_from(s.actor(), Term::tuple({tag("ch"), Term::public_name(s.identity),
                                              n, token}));
      s.pc = 3;
    } else {
      s.pc = 9;
    }
    return true;
  }

  // -- attestation verification ------------------------------------------

  std::vector<Action> v_attest_actions(const ExploreState& state, int session_idx,
                                       const Bounds& bounds) const {
    const RoleSession& s = state.sessions[session_idx];
    std::vector<Action> out;
    const Term n = s.store.at("n");
    const Term apk = s.store.at("apk");
    Term expected_payload = Term::tuple({good_hash(), n, counter_c()});
    for (const AggOption& opt : constructible_aggregates(state, *this, bounds)) {
      if (opt.cost > state.adv_agg_budget) continue;
      const Term& aggterm = opt.agg;
      for (auto& [pairs, claims] : accepting_queries(state, aggterm, expected_payload)) {
        bool in_apk = true;
        bool fresh = true;
        for (const VfyPair& p : pairs) {
          if (!apk_member(apk, p.pk)) in_apk = false;
          if (!(p.msg.kind() == TermKind::Tuple && p.msg.arity() == 3 &&
                p.msg.arg(1) == n && p.msg.arg(2) == counter_c()))
            fresh = false;
        }
        if (!in_apk || !fresh) continue;
        Allowed allowed =
            vfy_symbolic(state.model, state.oracle, state.registry, aggterm, pairs);
        if (!allowed.can_true) continue;
        Action a;
        a.session = session_idx;
        a.step = "v-attest";
        a.args = {aggterm, claims};
        out.push_back(std::move(a));
      }
    }
    return out;
  }

  using Query = std::pair<std::vector<VfyPair>, Term>;

  std::vector<Query> accepting_queries(const ExploreState& state, const Term& aggterm,
                                       const Term& free_msg) const {
    std::vector<Query> out;
    bool validation = is_validation_model(state.model);
    if (validation) {
      if (aggterm.kind() != TermKind::IndexedAgg) return out;
      std::vector<std::vector<Term>> options;
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
          std::set<Term, TermLess> msgs{sig.arg(0), free_msg};
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
        std::vector<Term> claims;
        std::vector<VfyPair> pairs;
        for (const Term& entry : core.args()) {
          auto id = state.registry.identity_of(entry.arg(1));
          if (!id) return {};
          claims.push_back(Term::tuple({entry.arg(0), Term::public_name(*id)}));
          pairs.push_back(VfyPair{entry.arg(0), entry.arg(1), Term()});
        }
        for (std::size_t i = 1; i < aggterm.arity(); ++i) {
          const Term& zpk = aggterm.arg(i);
          auto id = state.registry.identity_of(zpk);
          if (!id) return {};
          claims.push_back(Term::tuple({free_msg, Term::public_name(*id)}));
          pairs.push_back(VfyPair{free_msg, zpk, Term()});
        }
        out.emplace_back(std::move(pairs), Term::tuple(std::move(claims)));
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

  bool apply_v_attest(ExploreState& state, const Action& action, const Bounds& bounds) const {
    RoleSession& s = state.sessions[action.session];
    if (s.pc != 3 || action.args.size() != 2) return false;
    const Term& aggterm = action.args[0];
    const Term& claims = action.args[1];
    if (!deliver_aggregate(state, *this, bounds, aggterm)) return false;
    const Term n = s.store.at("n");
    const Term apk = s.store.at("apk");
    std::vector<VfyPair> pairs;
    for (const Term& claim : claims.args()) {
      auto pk = state.registry.pk_of(claim.arg(1).label());
      if (!pk) return false;
      if (!apk_member(apk, *pk)) return false;
      const Term& m = claim.arg(0);
      if (!(m.kind() == TermKind::Tuple && m.arity() == 3 && m.arg(1) == n &&
            m.arg(2) == counter_c()))
        return false;
      pairs.push_back(VfyPair{m, *pk, claim.arity() == 3 ? claim.arg(2) : Term()});
    }
    if (pairs.empty()) return false;
    Allowed allowed = vfy_symbolic(state.model, state.oracle, state.registry, aggterm, pairs);
    if (!allowed.can_true) return false;
    Term msg = Term::tuple({tag("aggresp"), aggterm, claims});
    if (!state.knowledge.can_derive(msg, bounds.deduction_depth)) return false;
    TraceEvent recv;
    recv.actor = s.actor();
    recv.kind = EventKind::Recv;
    recv.term = msg;
    state.emit(std::move(recv));
    state.record_vfy(s.actor(), aggterm, pairs, true);
    for (const VfyPair& p : pairs) {
      auto id = state.registry.identity_of(p.pk);
      TraceEvent commit;
      commit.actor = s.actor();
      commit.kind = EventKind::Commit;
      commit.claimant = s.identity;
      commit.partner = *id;
      commit.payload = Term::tuple({tag("attest"), p.msg});
      state.emit(std::move(commit));
    }
    s.pc = 9;
    return true;
  }

  // -- owner --------------------------------------------------------------

  std::vector<Action> owner_actions(const ExploreState& state, int session_idx,
                                    const Bounds& bounds) const {
    const RoleSession& s = state.sessions[session_idx];
    std::vector<Action> out;
    if (s.pc == 0) {
      // only verifier nonces can later match a message-4 check
      std::set<Term, TermLess> pool;
      for (const Term& n : closure_nonces(state, "nv.")) pool.insert(n);
      if (pool.empty()) pool.insert(adv_atom());
      for (const Term& y : pool) {
        Action a;
        a.session = session_idx;
        a.step = "o-start";
        a.args = {y};
        out.push_back(std::move(a));
      }
    } else if (s.pc == 1) {
      const Term no = s.store.at("no");
      for (const auto& [id, pk] : state.registry.pki()) {
        Term sig = Term::sign(no, pk.arg(0));
        if (!state.knowledge.can_derive(sig, bounds.deduction_depth)) continue;
        Action a;
        a.session = session_idx;
        a.step = "o-issue";
        a.args = {sig, Term::public_name(id)};
        out.push_back(std::move(a));
      }
    }
    return out;
  }

  bool apply_o_start(ExploreState& state, const Action& action, const Bounds& bounds) const {
    RoleSession& s = state.sessions[action.session];
    if (s.pc != 0 || action.args.size() != 1) return false;
    const Term& y = action.args[0];
    if (!state.knowledge.can_derive(y, bounds.deduction_depth)) return false;
    TraceEvent recv;
    recv.actor = s.actor();
    recv.kind = EventKind::Recv;
    recv.term = y;
    state.emit(std::move(recv));
    s.store["y"] = y;
    Term no = Term::nonce("no." + s.identity + "." + std::to_string(s.session));
    s.store["no"] = no;
    state.send_from(s.actor(), no);
    s.pc = 1;
    return true;
  }

  bool apply_o_issue(ExploreState& state, const Action& action, const Bounds& bounds) const {
    RoleSession& s = state.sessions[action.session];
    if (s.pc != 1 || action.args.size() != 2) return false;
    const Term& sig = action.args[0];
    const std::string verifier_id = action.args[1].label();
    auto v_pk = state.registry.pk_of(verifier_id);
    if (!v_pk) return false;
    const Term no = s.store.at("no");
    if (!(sig == Term::sign(no, v_pk->arg(0)))) return false;
    if (!state.knowledge.can_derive(sig, bounds.deduction_depth)) return false;
    std::string actor = s.actor();
    TraceEvent recv;
    recv.actor = actor;
    recv.kind = EventKind::Recv;
    recv.term = Term::tuple({tag("tr3"), sig, cert_term(verifier_id, *v_pk)});
    state.emit(std::move(recv));

    TraceEvent running;
    running.actor = actor;
    running.kind = EventKind::Running;
    running.claimant = s.identity;
    running.partner = verifier_id;
    running.payload = Term::tuple({tag("tr-run"), s.store.at("y")});
    state.emit(std::move(running));

    TraceEvent commit;
    commit.actor = actor;
    commit.kind = EventKind::Commit;
    commit.claimant = s.identity;
    commit.partner = verifier_id;
    commit.payload = Term::tuple({tag("tr-o"), no});
    state.emit(std::move(commit));

    Term sk_o = sk_of(state, s.identity);
    Term sig_t = Term::sign(Term::tuple({hw_set(), counter_c(), expiry_t()}), sk_o);
    Term token = token_body(sig_t);
    Term apk = owner_apk(state, s.identity);
    Term sig_ok = Term::sign(Term::tuple({s.store.at("y"), apk}), sk_o);
    // the owner knows its network: one run claim per prover for the token
    for (const std::string& p : provers_) {
      TraceEvent r;
      r.actor = actor;
      r.kind = EventKind::Running;
      r.claimant = s.identity;
      r.partner = p;
      r.payload = Term::tuple({tag("token"), token});
      state.emit(std::move(r));
    }
    auto o_pk = state.registry.pk_of(s.identity);
    state.send_from(actor, Term::tuple({tag("tr4"), Term::enc(token, *v_pk), apk, sig_ok,
                                        cert_term(s.identity, *o_pk)}));
    s.pc = 9;
    return true;
  }

  // -- prover ---------------------------------------------------------------

  std::vector<Term> challenge_candidates(const ExploreState& state) const {
    std::set<Term, TermLess> out;
    std::set<Term, TermLess> tokens;
    for (const Term& t : state.knowledge.closure()) {
      if (t.kind() == TermKind::Tuple && t.arity() == 4 && t.arg(0) == tag("ch")) {
        out.insert(t);
        tokens.insert(t.arg(3));
      }
      if (t.kind() == TermKind::Tuple && t.arity() == 5 && t.arg(0) == tag("token")) {
        tokens.insert(t);
      }
    }
    // adversary-composed challenges over known tokens
    std::set<Term, TermLess> nonces{adv_atom()};
    for (const Term& n : closure_nonces(state, "ch.")) nonces.insert(n);
    // no lemma reads the claimed sender, so spoofed-sender variants add
    // no distinguishable behavior; replayed nonces and tokens do
    for (const Term& token : tokens) {
      for (const Term& n : nonces) {
        out.insert(Term::tuple({tag("ch"), Term::public_name(attester_), n, token}));
      }
    }
    return {out.begin(), out.end()};
  }

  std::vector<Action> prover_actions(const ExploreState& state, int session_idx,
                                     const Bounds& bounds) const {
    const RoleSession& s = state.sessions[session_idx];
    std::vector<Action> out;
    if (s.pc != 0 || !full_) return out;
    Term owner_pk = *state.registry.pk_of(intended_owner_);
    for (const Term& ch : challenge_candidates(state)) {
      if (!token_valid(ch.arg(3), owner_pk.arg(0))) continue;
      if (!state.knowledge.can_derive(ch, bounds.deduction_depth)) continue;
      Action a;
      a.session = session_idx;
      a.step = "p-respond";
      a.args = {ch};
      out.push_back(std::move(a));
    }
    return out;
  }

  bool apply_p_respond(ExploreState& state, const Action& action, const Bounds& bounds) const {
    RoleSession& s = state.sessions[action.session];
    if (s.pc != 0 || action.args.size() != 1) return false;
    const Term& ch = action.args[0];
    if (ch.kind() != TermKind::Tuple || ch.arity() != 4 || !(ch.arg(0) == tag("ch")))
      return false;
    Term owner_pk = *state.registry.pk_of(intended_owner_);
    if (!token_valid(ch.arg(3), owner_pk.arg(0))) return false;
    if (!state.knowledge.can_derive(ch, bounds.deduction_depth)) return false;
    std::string actor = s.actor();
    TraceEvent recv;
    recv.actor = actor;
    recv.kind = EventKind::Recv;
    recv.term = ch;
    state.emit(std::move(recv));

    TraceEvent commit;
    commit.actor = actor;
    commit.kind = EventKind::Commit;
    commit.claimant = s.identity;
    commit.partner = intended_owner_;
    commit.payload = Term::tuple({tag("token"), ch.arg(3)});
    state.emit(std::move(commit));

    Term payload = Term::tuple({good_hash(), ch.arg(2), counter_c()});
    TraceEvent running;
    running.actor = actor;
    running.kind = EventKind::Running;
    running.claimant = s.identity;
    running.partner = ch.arg(1).label();
    running.payload = Term::tuple({tag("attest"), payload});
    state.emit(std::move(running));

    auto pk = state.registry.pk_of(s.identity);
    Term sig = Term::sign(payload, pk->arg(0));
    TraceEvent signed_evt;
    signed_evt.actor = actor;
    signed_evt.kind = EventKind::Sign;
    signed_evt.term = payload;
    signed_evt.aux = *pk;
    state.emit(std::move(signed_evt));
    state.send_from(actor, Term::tuple({tag("resp"), Term::public_name(s.identity), sig}));
    s.pc = 9;
    return true;
  }

  // -- aggregator --------------------------------------------------------

  std::vector<Term> response_bundles(const ExploreState& state) const {
    std::set<Term, TermLess> out;
    for (const Term& t : state.knowledge.closure()) {
      if (t.kind() != TermKind::Tuple || t.arity() != 3 || !(t.arg(0) == tag("resp")))
        continue;
      if (bundle_valid(state, t)) out.insert(t);
    }
    // responses the adversary can produce under keys it holds
    for (const Term& pk : state.registry.dishonest()) {
      if (pk.kind() != TermKind::Pk || pk.arg(0).kind() == TermKind::RogueSk) continue;
      if (!state.knowledge.can_derive(pk.arg(0), 1)) continue;
      auto id = state.registry.identity_of(pk);
      if (!id) continue;
      for (const Term& m : message_pool(state)) {
        out.insert(Term::tuple({tag("resp"), Term::public_name(*id), Term::sign(m, pk.arg(0))}));
      }
    }
    return {out.begin(), out.end()};
  }

  bool bundle_valid(const ExploreState& state, const Term& bundle) const {
    const Term& id = bundle.arg(1);
    const Term& sig = bundle.arg(2);
    if (id.kind() != TermKind::PublicName || sig.kind() != TermKind::Sign) return false;
    auto pk = state.registry.pk_of(id.label());
    return pk && *pk == Term::pk(sig.arg(1));
  }

  std::vector<Action> aggregator_actions(const ExploreState& state, int session_idx,
                                         const Bounds& bounds) const {
    const RoleSession& s = state.sessions[session_idx];
    std::vector<Action> out;
    if (!full_) return out;
    if (s.pc == 0) {
      Term owner_pk = *state.registry.pk_of(intended_owner_);
      for (const Term& ch : challenge_candidates(state)) {
        if (!token_valid(ch.arg(3), owner_pk.arg(0))) continue;
        if (!state.knowledge.can_derive(ch, bounds.deduction_depth)) continue;
        Action a;
        a.session = session_idx;
        a.step = "ag-forward";
        a.args = {ch};
        out.push_back(std::move(a));
      }
    } else if (s.pc == 1) {
      std::vector<Term> bundles = response_bundles(state);
      if (bundles.empty() || bundles.size() > 16) return out;
      for (std::uint32_t mask = 1; mask < (1u << bundles.size()); ++mask) {
        if (__builtin_popcount(mask) > bounds.max_agg_size) continue;
        Action a;
        a.session = session_idx;
        a.step = "ag-collect";
        for (std::size_t i = 0; i < bundles.size(); ++i) {
          if (mask & (1u << i)) a.args.push_back(bundles[i]);
        }
        out.push_back(std::move(a));
      }
    }
    return out;
  }

  bool apply_ag_forward(ExploreState& state, const Action& action, const Bounds& bounds) const {
    RoleSession& s = state.sessions[action.session];
    if (s.pc != 0 || action.args.size() != 1) return false;
    const Term& ch = action.args[0];
    Term owner_pk = *state.registry.pk_of(intended_owner_);
    if (ch.kind() != TermKind::Tuple || ch.arity() != 4 || !(ch.arg(0) == tag("ch")))
      return false;
    if (!token_valid(ch.arg(3), owner_pk.arg(0))) return false;
    if (!state.knowledge.can_derive(ch, bounds.deduction_depth)) return false;
    TraceEvent recv;
    recv.actor = s.actor();
    recv.kind = EventKind::Recv;
    recv.term = ch;
    state.emit(std::move(recv));
    state.send_from(s.actor(), ch);
    s.pc = 1;
    return true;
  }

  bool apply_ag_collect(ExploreState& state, const Action& action, const Bounds& bounds) const {
    RoleSession& s = state.sessions[action.session];
    if (s.pc != 1) return false;
    if (action.args.empty() || static_cast<int>(action.args.size()) > bounds.max_agg_size)
      return false;
    for (const Term& b : action.args) {
      if (b.kind() != TermKind::Tuple || b.arity() != 3 || !(b.arg(0) == tag("resp")))
        return false;
      if (!bundle_valid(state, b)) return false;
      if (!state.knowledge.can_derive(b, bounds.deduction_depth)) return false;
    }
    std::string actor = s.actor();
    bool validation = is_validation_model(state.model);
    std::vector<std::pair<Term, Term>> entries;
    std::vector<std::pair<Term, Term>> pairs;
    std::vector<Term> claims;
    for (std::size_t i = 0; i < action.args.size(); ++i) {
      const Term& b = action.args[i];
      TraceEvent recv;
      recv.actor = actor;
      recv.kind = EventKind::Recv;
      recv.term = b;
      state.emit(std::move(recv));
      const Term& id = b.arg(1);
      const Term& sig = b.arg(2);
      if (validation) {
        Term index = state.fresh_index(s.identity + std::to_string(s.session) + "." +
                                       std::to_string(i));
        entries.emplace_back(sig, index);
        claims.push_back(Term::tuple({sig.arg(0), id, index}));
        state.knowledge.add(index);
      } else {
        pairs.emplace_back(sig.arg(0), Term::pk(sig.arg(1)));
        claims.push_back(Term::tuple({sig.arg(0), id}));
      }
    }
    Term agg = validation ? Term::indexed_agg(std::move(entries))
                          : Term::valid_agg(std::move(pairs));
    state.send_from(actor, Term::tuple({tag("aggresp"), agg, Term::tuple(std::move(claims))}));
    s.pc = 9;
    return true;
  }

  ScenarioSpec spec_;
  bool full_ = false;
  std::string intended_owner_;
  std::string attester_;
  std::vector<std::string> provers_;
};

}  // namespace

std::unique_ptr<Protocol> make_sana_protocol(ScenarioSpec spec) {
  return std::make_unique<SanaProtocol>(std::move(spec));
}

ScenarioSpec token_request_scenario(ScenarioToggles::VerifierInit init) {
  ScenarioSpec spec;
  spec.name = init == ScenarioToggles::VerifierInit::None ? "token-request-noinit"
                                                          : "token-request-ownerid";
  spec.protocol = ProtocolKind::TokenRequest;
  spec.roles = {
      {"verifier", "V", 1},
      {"verifier", "V2", 2},
      {"owner", "O1", 1},
      {"owner", "O2", 1},
  };
  spec.compromised = {"E"};
  spec.toggles.verifier_init = init;
  spec.toggles.rogue_registration = false;
  spec.bounds = Bounds{};
  spec.bounds.adv_aggregations = 0;  // no aggregates in this subprotocol
  spec.bounds.dishonest_keys = 0;
  spec.bounds.rogue_keys = 0;
  spec.bounds.max_trace_length = 26;
  return spec;
}

ScenarioSpec sana_scenario(ScenarioToggles::VerifierInit init, bool dishonest_in_apk,
                           bool rogue, bool with_oracles) {
  ScenarioSpec spec;
  spec.protocol = ProtocolKind::SanaFull;
  spec.name = "sana";
  spec.roles = {
      {"verifier", "V", 1},
      {"owner", "O", 1},
      {"prover", "P1", 1},
      {"prover", "P2", 1},
      {"aggregator", "AG", 1},
  };
  if (with_oracles) {
    spec.roles.push_back({"verifier", "V2", 2});
    spec.roles.push_back({"verifier", "V3", 1});
    spec.name += "-oracles";
  } else {
    spec.roles.push_back({"verifier", "V2", 1});
  }
  spec.toggles.verifier_init = init;
  spec.toggles.dishonest_keys_in_apk = dishonest_in_apk;
  spec.toggles.rogue_registration = rogue;
  spec.bounds = Bounds{};
  spec.bounds.max_trace_length = 46;
  spec.bounds.adv_aggregations = 2;
  spec.bounds.dishonest_keys = dishonest_in_apk ? 1 : 0;
  spec.bounds.rogue_keys = rogue ? 1 : 0;
  spec.name += init == ScenarioToggles::VerifierInit::None ? "-noinit" : "-ownerid";
  if (dishonest_in_apk) spec.name += rogue ? "-rogue" : "-dishonest-apk";
  return spec;
}

std::vector<Lemma> token_request_lemmas() {
  return {
      Lemma::aliveness("owner", "verifier", "aliveness-owner"),
      Lemma::aliveness("verifier", "owner", "aliveness-verifier"),
      Lemma::weak_agreement("owner", "weak-agreement-owner"),
      Lemma::weak_agreement("verifier", "weak-agreement-verifier"),
  };
}

std::vector<Lemma> sana_lemmas() {
  return {
      Lemma::agreement("verifier", "prover", "attest", /*match_partner=*/false,
                       "attestation-agreement"),
      Lemma::agreement("prover", "owner", "token", /*match_partner=*/true,
                       "token-agreement"),
  };
}

}  // namespace aggsig
