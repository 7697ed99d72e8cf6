// Bounded exhaustive trace exploration: protocol role machines plus the
// Dolev-Yao adversary, interleaved up to the configured bounds. States
// are branch-local; the search deduplicates on a content hash so
// commuting interleavings merge. Oracle answers that a theory leaves
// free are explored on their accepting side only: the lemma predicates
// all trigger on positive events (true verdicts, commits), so a trace
// with a rejecting branch violates a lemma exactly when its accepting
// projection does.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aggsig/deduce.hpp"
#include "aggsig/models.hpp"
#include "aggsig/trace.hpp"

namespace aggsig {

struct RoleSession {
  std::string role;
  std::string identity;
  int session = 0;
  int pc = 0;
  std::map<std::string, Term> store;

  std::string actor() const { return make_actor(role, identity, session); }
  std::uint64_t hash_value() const;
};

struct InstrumentationStats {
  std::uint64_t vfy_queries = 0;
  std::uint64_t oracle_branches = 0;
  std::uint64_t memo_conflicts = 0;
  std::uint64_t correctness_violations = 0;
  std::uint64_t unforgeability_violations = 0;
  std::uint64_t disallowed_results = 0;

  bool clean() const {
    return memo_conflicts == 0 && correctness_violations == 0 &&
           unforgeability_violations == 0 && disallowed_results == 0;
  }
};

struct ExploreState {
  std::vector<RoleSession> sessions;
  Knowledge knowledge;
  KeyRegistry registry;
  VerificationOracle oracle;
  std::vector<TraceEvent> trace;

  int adv_agg_budget = 0;
  int dishonest_budget = 0;
  int rogue_budget = 0;
  int dishonest_seq = 0;
  int rogue_seq = 0;
  std::map<std::string, Term> globals;  // protocol blackboard

  ModelId model = ModelId::A4_Plain;
  InstrumentationStats* stats = nullptr;  // shared across branches

  void emit(TraceEvent e);
  void send_from(const std::string& actor, const Term& t);
  Term fresh_index(const std::string& hint);

  // Emits VfyAgg (plus OracleChoice when the theory left the verdict
  // free), records the oracle memo, and updates instrumentation.
  // `result` must lie in the allowed set.
  void record_vfy(const std::string& actor, const Term& agg,
                  const std::vector<VfyPair>& pairs, bool result);

  std::uint64_t hash_value() const;  // excludes the trace
};

struct Action {
  enum class Kind { RoleStep, AdvRule };
  Kind kind = Kind::RoleStep;
  int session = -1;         // RoleStep: index into sessions
  std::string step;         // RoleStep: step name (for rendering/replay)
  AdvRule rule{};           // AdvRule
  std::vector<Term> args;   // bindings / rule arguments

  bool operator==(const Action& o) const;
  std::string render() const;
};

// A protocol binds scenario configuration to role machines. Enumeration
// must be canonical (sorted pools) so exploration is deterministic.
class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual std::string name() const = 0;
  virtual void setup(ExploreState& state) const = 0;
  virtual std::vector<Action> role_actions(const ExploreState& state, int session_idx,
                                           const Bounds& bounds) const = 0;
  // Returns false when the action is no longer legal (replay validation).
  virtual bool apply_role(ExploreState& state, const Action& action,
                          const Bounds& bounds) const = 0;
  // Messages the adversary plugs into self-made signatures and rogue or
  // colliding aggregates.
  virtual std::vector<Term> message_pool(const ExploreState& state) const = 0;
  // Honest keys the rogue rules may target; defaults to all honest pks.
  virtual std::vector<Term> rogue_targets(const ExploreState& state) const;
  // Protocol-level key registration capability on top of the theory's own
  // rules (an adversary key admitted into the apk, say).
  virtual bool allow_dishonest_registration() const { return false; }
  // Whether the scenario admits rogue registrations at all; the theory
  // must additionally support them.
  virtual bool allow_rogue_registration() const { return true; }
};

struct ExploreResult {
  Verdict verdict;
  InstrumentationStats stats;
};

enum class SearchOrder { DepthFirst, BreadthFirst };

class Explorer {
 public:
  Explorer(const Protocol& protocol, ModelId model, Lemma lemma, Bounds bounds,
           SearchOrder order = SearchOrder::DepthFirst);

  // Exhaustive search in canonical action order; first violation wins.
  ExploreResult run();
  // Executes exactly the given schedule, validating each action against
  // the enabled set, then evaluates the lemma on the resulting trace.
  ExploreResult replay(const std::vector<Action>& schedule);
  // Seeded random walks through the same action space.
  ExploreResult randomized(std::uint64_t seed, int walks);

  ExploreState initial_state(InstrumentationStats* stats) const;
  std::vector<Action> enumerate(const ExploreState& state) const;
  // nullopt when the action is not legal in this state
  std::optional<ExploreState> apply(const ExploreState& state, const Action& action) const;

 private:
  std::vector<Action> adversary_actions(const ExploreState& state) const;
  bool apply_adversary(ExploreState& state, const Action& action) const;

  const Protocol& protocol_;
  ModelId model_;
  Lemma lemma_;
  Bounds bounds_;
  SearchOrder order_;
};

// Signatures the adversary can hand to an aggregation: every signature
// term it observed plus self-made signatures under keys it holds.
std::vector<Term> signature_instances(const ExploreState& state, const Protocol& protocol);

// Aggregate terms deliverable in the current state with their rule-
// application cost: terms already on the network cost nothing; fresh
// adversary aggregations, rogue aggregations, and colliding aggregations
// consume the aggregation budget at the moment a verifier receives them.
// Deferring construction to the delivery point is observation-equivalent
// to the eager rules because aggregate terms are opaque everywhere else.
struct AggOption {
  Term agg;
  int cost;
};
std::vector<AggOption> constructible_aggregates(const ExploreState& state,
                                                const Protocol& protocol,
                                                const Bounds& bounds);

// Publishes `agg` to the network, charging its construction cost; false
// when it is neither known nor constructible within the budget.
bool deliver_aggregate(ExploreState& state, const Protocol& protocol, const Bounds& bounds,
                       const Term& agg);

std::uint64_t trace_summary_hash(const std::vector<TraceEvent>& trace);

}  // namespace aggsig
