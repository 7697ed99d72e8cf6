#include "aggsig/explorer.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "aggsig/rng.hpp"

namespace aggsig {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t hash_str(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t event_content_hash(const TraceEvent& e) {
  std::uint64_t h = mix(static_cast<std::uint64_t>(e.kind), hash_str(e.actor));
  h = mix(h, e.term.hash_value());
  h = mix(h, e.aux.hash_value());
  h = mix(h, e.agg.hash_value());
  for (const VfyPair& p : e.pairs) {
    h = mix(h, p.msg.hash_value());
    h = mix(h, p.pk.hash_value());
    h = mix(h, p.index.hash_value());
  }
  h = mix(h, e.result ? 0x853c49e6748fea9bull : 0xda3e39cb94b95bdbull);
  h = mix(h, hash_str(e.claimant));
  h = mix(h, hash_str(e.partner));
  h = mix(h, e.payload.hash_value());
  return h;
}

}  // namespace

std::uint64_t trace_summary_hash(const std::vector<TraceEvent>& trace) {
  // order-insensitive: surviving states are violation-free, so only the
  // set of emitted events matters for future violations
  std::uint64_t h = 0x2545f4914f6cdd1dull;
  for (const TraceEvent& e : trace) h ^= event_content_hash(e) * 0x9e3779b97f4a7c15ull;
  return h;
}

std::uint64_t RoleSession::hash_value() const {
  std::uint64_t h = mix(hash_str(role), hash_str(identity));
  h = mix(h, static_cast<std::uint64_t>(session));
  h = mix(h, static_cast<std::uint64_t>(pc));
  for (const auto& [k, v] : store) {
    h = mix(h, hash_str(k));
    h = mix(h, v.hash_value());
  }
  return h;
}

void ExploreState::emit(TraceEvent e) {
  e.position = static_cast<int>(trace.size());
  trace.push_back(std::move(e));
}

void ExploreState::send_from(const std::string& actor, const Term& t) {
  TraceEvent e;
  e.actor = actor;
  e.kind = EventKind::Send;
  e.term = t;
  emit(std::move(e));
  knowledge.add(t);
}

Term ExploreState::fresh_index(const std::string& hint) {
  return Term::public_name("i." + hint);
}

void ExploreState::record_vfy(const std::string& actor, const Term& agg,
                              const std::vector<VfyPair>& pairs, bool result) {
  Allowed allowed = vfy_symbolic(model, oracle, registry, agg, pairs);
  if (stats) {
    ++stats->vfy_queries;
    bool in_allowed = result ? allowed.can_true : allowed.can_false;
    if (!in_allowed) ++stats->disallowed_results;
    if (is_validation_model(model)) {
      // correctness: all-honest matching queries must verify
      bool all_honest_matching = true;
      for (const VfyPair& p : pairs) {
        bool honest = registry.is_honest(p.pk);
        bool matching = false;
        for (const Term& entry : agg.args()) {
          if (entry.arg(1) == p.index) {
            const Term& sig = entry.arg(0);
            matching = sig.kind() == TermKind::Sign && sig.arg(0) == p.msg &&
                       p.pk.kind() == TermKind::Pk && sig.arg(1) == p.pk.arg(0);
          }
        }
        if (!honest || !matching) {
          all_honest_matching = false;
          break;
        }
      }
      if (all_honest_matching && !result) ++stats->correctness_violations;
      // unforgeability, v1/v2: a true verdict never attributes an unsigned
      // message to an honest key
      if (result && model != ModelId::V3_RogueKey) {
        for (const VfyPair& p : pairs) {
          if (!registry.is_honest(p.pk)) continue;
          bool signed_before = false;
          for (const TraceEvent& ev : trace) {
            if (ev.kind == EventKind::Sign && ev.term == p.msg && ev.aux == p.pk) {
              signed_before = true;
              break;
            }
          }
          if (!signed_before) ++stats->unforgeability_violations;
        }
      }
    }
  }
  Term key = pairs_key(pairs);
  if (is_validation_model(model)) {
    bool fresh = !oracle.lookup(agg, key).has_value();
    if (!oracle.record(agg, key, result)) {
      if (stats) ++stats->memo_conflicts;
    }
    if (fresh && allowed.branching()) {
      if (stats) ++stats->oracle_branches;
      TraceEvent choice;
      choice.actor = "oracle";
      choice.kind = EventKind::OracleChoice;
      choice.aux = Term::tuple({agg, key});
      choice.result = result;
      emit(std::move(choice));
    }
  }
  TraceEvent e;
  e.actor = actor;
  e.kind = EventKind::VfyAgg;
  e.agg = agg;
  e.pairs = pairs;
  e.result = result;
  emit(std::move(e));
}

std::uint64_t ExploreState::hash_value() const {
  std::uint64_t h = 0x6c62272e07bb0142ull;
  for (const RoleSession& s : sessions) h = mix(h, s.hash_value());
  h = mix(h, knowledge.hash_value());
  h = mix(h, registry.hash_value());
  h = mix(h, oracle.hash_value());
  h = mix(h, static_cast<std::uint64_t>(adv_agg_budget));
  h = mix(h, static_cast<std::uint64_t>(dishonest_budget));
  h = mix(h, static_cast<std::uint64_t>(rogue_budget));
  for (const auto& [k, v] : globals) {
    h = mix(h, hash_str(k));
    h = mix(h, v.hash_value());
  }
  h = mix(h, trace_summary_hash(trace));
  return h;
}

bool Action::operator==(const Action& o) const {
  if (kind != o.kind || session != o.session || step != o.step) return false;
  if (kind == Kind::AdvRule && rule != o.rule) return false;
  if (args.size() != o.args.size()) return false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] != o.args[i]) return false;
  }
  return true;
}

std::string Action::render() const {
  std::ostringstream os;
  if (kind == Kind::RoleStep) {
    os << "step " << step << " session=" << session;
  } else {
    switch (rule) {
      case AdvRule::AggregateValid: os << "adv aggregate"; break;
      case AdvRule::ExtendAgg: os << "adv extend-agg"; break;
      case AdvRule::RegisterDishonest: os << "adv register-dishonest"; break;
      case AdvRule::RegisterRogue: os << "adv register-rogue"; break;
      case AdvRule::RogueAggregate: os << "adv rogue-aggregate"; break;
      case AdvRule::ZeroAggregate: os << "adv zero-aggregate"; break;
    }
  }
  for (const Term& t : args) os << " " << t.render();
  return os.str();
}

std::vector<Term> Protocol::rogue_targets(const ExploreState& state) const {
  return {state.registry.honest().begin(), state.registry.honest().end()};
}

Explorer::Explorer(const Protocol& protocol, ModelId model, Lemma lemma, Bounds bounds,
                   SearchOrder order)
    : protocol_(protocol), model_(model), lemma_(std::move(lemma)), bounds_(bounds),
      order_(order) {}

ExploreState Explorer::initial_state(InstrumentationStats* stats) const {
  ExploreState state;
  state.model = model_;
  state.stats = stats;
  state.adv_agg_budget = bounds_.adv_aggregations;
  state.dishonest_budget = bounds_.dishonest_keys;
  state.rogue_budget = bounds_.rogue_keys;
  protocol_.setup(state);
  return state;
}

std::vector<Term> signature_instances(const ExploreState& state, const Protocol& protocol) {
  std::set<Term, TermLess> sigs;
  for (const Term& t : state.knowledge.closure()) {
    if (t.kind() == TermKind::Sign) sigs.insert(t);
  }
  // self-made signatures under adversary-held keys
  std::vector<Term> pool = protocol.message_pool(state);
  for (const Term& pk : state.registry.dishonest()) {
    if (pk.kind() != TermKind::Pk) continue;  // rogue pks have no usable key
    const Term& sk = pk.arg(0);
    if (sk.kind() == TermKind::RogueSk) continue;
    if (!state.knowledge.can_derive(sk, 1)) continue;
    for (const Term& m : pool) sigs.insert(Term::sign(m, sk));
  }
  return {sigs.begin(), sigs.end()};
}

namespace {

void subsets_up_to(const std::vector<Term>& items, int max_size, bool allow_empty,
                   const std::function<void(const std::vector<Term>&)>& fn) {
  if (items.size() > 16) return;
  std::vector<Term> chosen;
  std::uint32_t limit = 1u << items.size();
  for (std::uint32_t mask = allow_empty ? 0 : 1; mask < limit; ++mask) {
    if (__builtin_popcount(mask) > max_size) continue;
    chosen.clear();
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (mask & (1u << i)) chosen.push_back(items[i]);
    }
    fn(chosen);
  }
}

Term build_plain_aggregate(const ExploreState& state, const std::vector<Term>& sigs) {
  if (is_validation_model(state.model)) {
    std::vector<std::pair<Term, Term>> entries;
    for (std::size_t i = 0; i < sigs.size(); ++i) {
      entries.emplace_back(sigs[i],
                           Term::public_name("i.a" + std::to_string(state.adv_agg_budget) +
                                             "." + std::to_string(i)));
    }
    return Term::indexed_agg(std::move(entries));
  }
  std::vector<std::pair<Term, Term>> pairs;
  for (const Term& sig : sigs) pairs.emplace_back(sig.arg(0), Term::pk(sig.arg(1)));
  return Term::valid_agg(std::move(pairs));
}

Term build_rogue_aggregate(const ExploreState& state, const Term& rogue_pk,
                           const Term& target, const Term& msg,
                           const std::vector<Term>& extra_sigs) {
  int tag = state.adv_agg_budget;
  if (is_validation_model(state.model)) {
    std::vector<std::pair<Term, Term>> entries{
        {Term::sign(msg, target.arg(0)), Term::public_name("i.rt" + std::to_string(tag))},
        {Term::sign(msg, rogue_pk.arg(0)), Term::public_name("i.rr" + std::to_string(tag))}};
    for (std::size_t i = 0; i < extra_sigs.size(); ++i) {
      entries.emplace_back(extra_sigs[i], Term::public_name("i.rx" + std::to_string(tag) +
                                                            "." + std::to_string(i)));
    }
    return Term::indexed_agg(std::move(entries));
  }
  std::vector<std::pair<Term, Term>> pairs{{msg, target}, {msg, rogue_pk}};
  for (const Term& sig : extra_sigs) pairs.emplace_back(sig.arg(0), Term::pk(sig.arg(1)));
  return Term::rogue_agg(std::move(pairs));
}

}  // namespace

std::vector<AggOption> constructible_aggregates(const ExploreState& state,
                                                const Protocol& protocol,
                                                const Bounds& bounds) {
  std::set<AdvRule> rules = adversary_rules(state.model);
  std::vector<AggOption> out;
  std::set<Term, TermLess> seen;
  auto add = [&out, &seen](Term agg, int cost) {
    if (seen.insert(agg).second) out.push_back(AggOption{std::move(agg), cost});
  };
  for (const Term& t : state.knowledge.closure()) {
    if (t.is_agg_shaped()) add(t, 0);
  }
  if (state.adv_agg_budget <= 0) return out;
  std::vector<Term> sigs = signature_instances(state, protocol);
  std::vector<Term> closure_valid_aggs;
  for (const Term& t : state.knowledge.closure()) {
    if (t.kind() == TermKind::ValidAgg) closure_valid_aggs.push_back(t);
  }
  if (rules.count(AdvRule::AggregateValid)) {
    subsets_up_to(sigs, bounds.max_agg_size, /*allow_empty=*/false,
                  [&](const std::vector<Term>& chosen) {
                    add(build_plain_aggregate(state, chosen), 1);
                  });
  }
  if (rules.count(AdvRule::RogueAggregate)) {
    for (const Term& rogue_pk : state.registry.dishonest()) {
      auto target = state.registry.rogue_target(rogue_pk);
      if (!target) continue;
      for (const Term& m : protocol.message_pool(state)) {
        subsets_up_to(sigs, bounds.max_agg_size - 2, /*allow_empty=*/true,
                      [&](const std::vector<Term>& extras) {
                        int cost = extras.empty() ? 1 : 2;
                        if (cost > state.adv_agg_budget) return;
                        add(build_rogue_aggregate(state, rogue_pk, *target, m, extras),
                            cost);
                      });
      }
    }
  }
  if (rules.count(AdvRule::ZeroAggregate) && !is_validation_model(state.model)) {
    std::vector<Term> zero_pks;
    for (const Term& pk : state.registry.dishonest()) {
      if (!state.registry.rogue_target(pk)) zero_pks.push_back(pk);
    }
    if (!zero_pks.empty()) {
      // cores already on the network cost one application, fresh cores two
      std::vector<std::pair<Term, int>> cores;
      for (const Term& core : closure_valid_aggs) cores.emplace_back(core, 1);
      subsets_up_to(sigs, bounds.max_agg_size - 1, /*allow_empty=*/false,
                    [&](const std::vector<Term>& chosen) {
                      if (state.adv_agg_budget < 2 || is_validation_model(state.model))
                        return;
                      std::vector<std::pair<Term, Term>> pairs;
                      for (const Term& sig : chosen)
                        pairs.emplace_back(sig.arg(0), Term::pk(sig.arg(1)));
                      cores.emplace_back(Term::valid_agg(std::move(pairs)), 2);
                    });
      for (const auto& [core, base_cost] : cores) {
        subsets_up_to(zero_pks, bounds.max_agg_size - static_cast<int>(core.arity()),
                      /*allow_empty=*/false, [&](const std::vector<Term>& zs) {
                        if (base_cost > state.adv_agg_budget) return;
                        add(Term::zero_agg(core, zs), base_cost);
                      });
      }
    }
  }
  return out;
}

bool deliver_aggregate(ExploreState& state, const Protocol& protocol, const Bounds& bounds,
                       const Term& agg) {
  if (state.knowledge.knows(agg)) return true;
  for (const AggOption& opt : constructible_aggregates(state, protocol, bounds)) {
    if (opt.agg == agg) {
      if (opt.cost > state.adv_agg_budget) return false;
      state.adv_agg_budget -= opt.cost;
      if (agg.kind() == TermKind::IndexedAgg) {
        for (const Term& entry : agg.args()) state.knowledge.add(entry.arg(1));
      }
      state.send_from("adversary", agg);
      return true;
    }
  }
  return false;
}

std::vector<Action> Explorer::adversary_actions(const ExploreState& state) const {
  std::vector<Action> out;
  std::set<AdvRule> rules = adversary_rules(model_);

  auto add = [&out](AdvRule rule, std::vector<Term> args) {
    Action a;
    a.kind = Action::Kind::AdvRule;
    a.rule = rule;
    a.args = std::move(args);
    out.push_back(std::move(a));
  };

  if ((rules.count(AdvRule::RegisterDishonest) ||
       protocol_.allow_dishonest_registration()) &&
      state.dishonest_budget > 0) {
    add(AdvRule::RegisterDishonest, {});
  }
  if (rules.count(AdvRule::RegisterRogue) && protocol_.allow_rogue_registration() &&
      state.rogue_budget > 0) {
    for (const Term& target : protocol_.rogue_targets(state)) {
      add(AdvRule::RegisterRogue, {target});
    }
  }
  // aggregate construction is deferred to the point of delivery; see
  // constructible_aggregates
  return out;
}

bool Explorer::apply_adversary(ExploreState& state, const Action& action) const {
  std::set<AdvRule> rules = adversary_rules(model_);
  bool validation = is_validation_model(model_);
  switch (action.rule) {
    case AdvRule::RegisterDishonest: {
      if (!rules.count(action.rule) && !protocol_.allow_dishonest_registration())
        return false;
      if (state.dishonest_budget <= 0) return false;
      --state.dishonest_budget;
      int seq = ++state.dishonest_seq;
      std::string id = "D" + std::to_string(seq);
      Term sk = Term::nonce("sk" + id);
      Term pk = Term::pk(sk);
      state.registry.register_dishonest(id, pk);
      state.knowledge.add(sk);
      state.knowledge.add(pk);
      TraceEvent e;
      e.actor = "adversary";
      e.kind = EventKind::RegisterDishonest;
      e.term = pk;
      state.emit(std::move(e));
      return true;
    }
    case AdvRule::RegisterRogue: {
      if (!rules.count(action.rule) || !protocol_.allow_rogue_registration()) return false;
      if (state.rogue_budget <= 0 || action.args.size() != 1) return false;
      const Term& target = action.args[0];
      if (!state.registry.is_honest(target)) return false;
      --state.rogue_budget;
      int seq = ++state.rogue_seq;
      std::string id = "R" + std::to_string(seq);
      Term rogue = validation ? Term::pk(Term::rogue_sk(target)) : Term::rogue_pk(target);
      if (state.registry.is_registered(rogue)) return false;
      state.registry.register_rogue(id, rogue, target);
      state.knowledge.add(rogue);
      TraceEvent e;
      e.actor = "adversary";
      e.kind = EventKind::RegisterRogue;
      e.term = rogue;
      e.aux = target;
      state.emit(std::move(e));
      return true;
    }
    case AdvRule::AggregateValid: {
      if (!rules.count(action.rule)) return false;
      if (state.adv_agg_budget <= 0 || action.args.empty()) return false;
      if (static_cast<int>(action.args.size()) > bounds_.max_agg_size) return false;
      for (const Term& sig : action.args) {
        if (sig.kind() != TermKind::Sign) return false;
        if (!state.knowledge.can_derive(sig, bounds_.deduction_depth)) return false;
      }
      int tag = state.adv_agg_budget;
      --state.adv_agg_budget;
      Term agg;
      if (validation) {
        std::vector<std::pair<Term, Term>> entries;
        std::vector<Term> indices;
        for (std::size_t i = 0; i < action.args.size(); ++i) {
          Term index = state.fresh_index("adv" + std::to_string(tag) + "." + std::to_string(i));
          entries.emplace_back(action.args[i], index);
          indices.push_back(index);
        }
        agg = Term::indexed_agg(std::move(entries));
        for (const Term& ix : indices) state.knowledge.add(ix);
      } else {
        std::vector<std::pair<Term, Term>> pairs;
        for (const Term& sig : action.args) {
          pairs.emplace_back(sig.arg(0), Term::pk(sig.arg(1)));
        }
        agg = Term::valid_agg(std::move(pairs));
      }
      state.send_from("adversary", agg);
      return true;
    }
    case AdvRule::ExtendAgg: {
      if (!rules.count(action.rule)) return false;
      if (state.adv_agg_budget <= 0 || action.args.size() != 2) return false;
      const Term& base = action.args[0];
      const Term& sig = action.args[1];
      if (!state.knowledge.knows(base)) return false;
      if (sig.kind() != TermKind::Sign) return false;
      if (!state.knowledge.can_derive(sig, bounds_.deduction_depth)) return false;
      if (static_cast<int>(base.arity()) >= bounds_.max_agg_size) return false;
      int tag = state.adv_agg_budget;
      --state.adv_agg_budget;
      Term agg;
      if (base.kind() == TermKind::IndexedAgg) {
        if (!validation) return false;
        std::vector<std::pair<Term, Term>> entries;
        for (const Term& entry : base.args()) entries.emplace_back(entry.arg(0), entry.arg(1));
        Term index = state.fresh_index("ext" + std::to_string(tag));
        entries.emplace_back(sig, index);
        agg = Term::indexed_agg(std::move(entries));
        state.knowledge.add(index);
      } else if (base.kind() == TermKind::ValidAgg || base.kind() == TermKind::RogueAgg) {
        if (validation) return false;
        std::vector<std::pair<Term, Term>> pairs;
        for (const Term& entry : base.args()) pairs.emplace_back(entry.arg(0), entry.arg(1));
        pairs.emplace_back(sig.arg(0), Term::pk(sig.arg(1)));
        agg = base.kind() == TermKind::ValidAgg ? Term::valid_agg(std::move(pairs))
                                                : Term::rogue_agg(std::move(pairs));
      } else {
        return false;
      }
      state.send_from("adversary", agg);
      return true;
    }
    case AdvRule::RogueAggregate: {
      if (!rules.count(action.rule)) return false;
      if (state.adv_agg_budget <= 0 || action.args.size() != 2) return false;
      const Term& rogue_pk = action.args[0];
      const Term& m = action.args[1];
      auto target = state.registry.rogue_target(rogue_pk);
      if (!target) return false;
      if (!state.knowledge.can_derive(m, bounds_.deduction_depth)) return false;
      int tag = state.adv_agg_budget;
      --state.adv_agg_budget;
      Term agg;
      if (validation) {
        // the rule uses both secret keys internally; the adversary learns
        // only the finished aggregate
        const Term& target_sk = target->arg(0);
        Term i1 = state.fresh_index("rt" + std::to_string(tag));
        Term i2 = state.fresh_index("rr" + std::to_string(tag));
        agg = Term::indexed_agg({{Term::sign(m, target_sk), i1},
                                 {Term::sign(m, rogue_pk.arg(0)), i2}});
        state.knowledge.add(i1);
        state.knowledge.add(i2);
      } else {
        agg = Term::rogue_agg({{m, *target}, {m, rogue_pk}});
      }
      state.send_from("adversary", agg);
      return true;
    }
    case AdvRule::ZeroAggregate: {
      if (!rules.count(action.rule)) return false;
      if (state.adv_agg_budget <= 0 || action.args.size() < 2 || validation) return false;
      const Term& core = action.args[0];
      if (core.kind() != TermKind::ValidAgg || !state.knowledge.knows(core)) return false;
      std::vector<Term> zero_pks(action.args.begin() + 1, action.args.end());
      for (const Term& pk : zero_pks) {
        if (!state.registry.is_dishonest(pk) || state.registry.rogue_target(pk)) return false;
      }
      if (static_cast<int>(core.arity() + zero_pks.size()) > bounds_.max_agg_size)
        return false;
      --state.adv_agg_budget;
      Term agg = Term::zero_agg(core, std::move(zero_pks));
      state.send_from("adversary", agg);
      return true;
    }
  }
  return false;
}

std::vector<Action> Explorer::enumerate(const ExploreState& state) const {
  std::vector<Action> out;
  for (std::size_t i = 0; i < state.sessions.size(); ++i) {
    std::vector<Action> acts = protocol_.role_actions(state, static_cast<int>(i), bounds_);
    out.insert(out.end(), acts.begin(), acts.end());
  }
  std::vector<Action> adv = adversary_actions(state);
  out.insert(out.end(), adv.begin(), adv.end());
  return out;
}

std::optional<ExploreState> Explorer::apply(const ExploreState& state,
                                            const Action& action) const {
  ExploreState next = state;
  bool ok = action.kind == Action::Kind::RoleStep
                ? protocol_.apply_role(next, action, bounds_)
                : apply_adversary(next, action);
  if (!ok) return std::nullopt;
  return next;
}

namespace {

struct DfsContext {
  std::unordered_set<std::uint64_t> visited;
  std::uint64_t states = 0;
  std::optional<std::vector<TraceEvent>> counterexample;
};

}  // namespace

ExploreResult Explorer::run() {
  InstrumentationStats stats;
  ExploreState init = initial_state(&stats);
  DfsContext ctx;
  ctx.visited.insert(init.hash_value());
  ctx.states = 1;

  // explicit frontier preserving canonical order in either regime
  std::deque<ExploreState> frontier{init};
  while (!frontier.empty() && !ctx.counterexample) {
    ExploreState state;
    if (order_ == SearchOrder::DepthFirst) {
      state = std::move(frontier.back());
      frontier.pop_back();
    } else {
      state = std::move(frontier.front());
      frontier.pop_front();
    }
    std::vector<Action> actions = enumerate(state);
    std::vector<ExploreState> children;
    children.reserve(actions.size());
    for (const Action& action : actions) {
      auto next = apply(state, action);
      if (!next) continue;
      if (lemma_violated(next->trace, lemma_, next->registry)) {
        ctx.counterexample = next->trace;
        break;
      }
      if (static_cast<int>(next->trace.size()) >= bounds_.max_trace_length) continue;
      std::uint64_t h = next->hash_value();
      if (!ctx.visited.insert(h).second) continue;
      ++ctx.states;
      children.push_back(std::move(*next));
    }
    if (ctx.counterexample) break;
    if (order_ == SearchOrder::DepthFirst) {
      // push reversed so the first action is expanded first
      for (auto it = children.rbegin(); it != children.rend(); ++it) {
        frontier.push_back(std::move(*it));
      }
    } else {
      for (ExploreState& child : children) frontier.push_back(std::move(child));
    }
  }

  ExploreResult result;
  result.stats = stats;
  if (ctx.counterexample) {
    result.verdict = Verdict::counterexample(std::move(*ctx.counterexample), bounds_, ctx.states);
  } else {
    result.verdict = Verdict::safe(bounds_, ctx.states);
  }
  return result;
}

ExploreResult Explorer::replay(const std::vector<Action>& schedule) {
  InstrumentationStats stats;
  ExploreState state = initial_state(&stats);
  for (const Action& action : schedule) {
    if (action.kind == Action::Kind::RoleStep) {
      std::vector<Action> enabled = enumerate(state);
      bool listed = std::any_of(enabled.begin(), enabled.end(),
                                [&](const Action& a) { return a == action; });
      if (!listed) {
        throw std::runtime_error("schedule action not enabled: " + action.render());
      }
    }
    auto next = apply(state, action);
    if (!next) throw std::runtime_error("schedule action failed: " + action.render());
    state = std::move(*next);
  }
  ExploreResult result;
  result.stats = stats;
  bool violated = lemma_violated(state.trace, lemma_, state.registry);
  result.verdict = Verdict{violated, state.trace, bounds_, schedule.size()};
  return result;
}

ExploreResult Explorer::randomized(std::uint64_t seed, int walks) {
  InstrumentationStats stats;
  std::uint64_t states = 0;
  for (int w = 0; w < walks; ++w) {
    Rng rng(seed + static_cast<std::uint64_t>(w) * 0x9e3779b97f4a7c15ull);
    ExploreState state = initial_state(&stats);
    while (static_cast<int>(state.trace.size()) < bounds_.max_trace_length) {
      std::vector<Action> actions = enumerate(state);
      if (actions.empty()) break;
      const Action& pick = actions[rng.below(actions.size())];
      auto next = apply(state, pick);
      if (!next) break;
      ++states;
      state = std::move(*next);
      if (lemma_violated(state.trace, lemma_, state.registry)) {
        ExploreResult result;
        result.stats = stats;
        result.verdict = Verdict::counterexample(state.trace, bounds_, states);
        return result;
      }
    }
  }
  ExploreResult result;
  result.stats = stats;
  result.verdict = Verdict::safe(bounds_, states);
  return result;
}

}  // namespace aggsig
