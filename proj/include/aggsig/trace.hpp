// Trace events, exploration bounds, verdicts, and the lemma predicates
// evaluated over finite traces.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aggsig/models.hpp"
#include "aggsig/term.hpp"

namespace aggsig {

enum class EventKind {
  Sign,
  VfyAgg,
  Running,
  Commit,
  RegisterHonest,
  RegisterDishonest,
  RegisterRogue,
  OracleChoice,
  Send,
  Recv,
};

std::string event_kind_name(EventKind k);

// Actor ids are "role:identity#session" for protocol steps and
// "adversary" for rule applications.
std::string make_actor(const std::string& role, const std::string& identity, int session);
std::string actor_role(const std::string& actor);
std::string actor_identity(const std::string& actor);

struct TraceEvent {
  int position = 0;
  std::string actor;
  EventKind kind = EventKind::Send;

  Term term;                   // Sign: message; Send/Recv: payload; registers: pk
  Term aux;                    // Sign: pk; RegisterRogue: target pk; OracleChoice: query key
  Term agg;                    // VfyAgg
  std::vector<VfyPair> pairs;  // VfyAgg
  bool result = false;         // VfyAgg / OracleChoice

  std::string claimant;  // Running/Commit: identity making the claim
  std::string partner;   // apparent partner identity; empty when unnamed
  Term payload;          // Running/Commit payload

  std::string render() const;       // single-line human-readable form
  std::string render_json() const;  // one trace-v1 object
};

struct Bounds {
  int max_sessions_per_role = 2;
  int max_agg_size = 3;
  int deduction_depth = 4;
  int max_trace_length = 30;
  // adversary rule budgets
  int adv_aggregations = 3;
  int dishonest_keys = 1;
  int rogue_keys = 1;

  std::string render() const;
};

struct Verdict {
  bool falsified = false;
  std::vector<TraceEvent> trace;  // counterexample when falsified
  Bounds bounds;
  std::uint64_t states_explored = 0;

  static Verdict safe(const Bounds& b, std::uint64_t states) {
    return Verdict{false, {}, b, states};
  }
  static Verdict counterexample(std::vector<TraceEvent> t, const Bounds& b,
                                std::uint64_t states) {
    return Verdict{true, std::move(t), b, states};
  }
};

struct Lemma {
  enum class Kind {
    MessageAuthenticity,
    WeakAgreement,
    NoSplittingZero,
    NoRogueKey,
    Aliveness,
    NonInjectiveAgreement,
  };
  Kind kind;
  std::string name;            // canonical CLI name
  std::string claimant_role;   // role whose claim events are inspected
  std::string partner_role;    // role the partner must have acted in
  std::string payload_tag;     // agreement payload selector
  bool match_partner = true;   // agreement: must Running name the claimant?

  static Lemma message_authenticity();
  static Lemma weak_agreement(const std::string& claimant_role,
                              const std::string& name = "weak-agreement");
  static Lemma no_splitting_zero();
  static Lemma no_rogue_key(const std::string& verifier_role = "verifier");
  static Lemma aliveness(const std::string& claimant_role, const std::string& partner_role,
                         const std::string& name);
  static Lemma agreement(const std::string& claimant_role, const std::string& partner_role,
                         const std::string& payload_tag, bool match_partner,
                         const std::string& name);
};

// True iff the trace violates the lemma. Pure predicate; the registry
// supplies key honesty for identities.
bool lemma_violated(const std::vector<TraceEvent>& trace, const Lemma& lemma,
                    const KeyRegistry& registry);

// Human-readable reason for the first violation found, if any.
std::optional<std::string> violation_reason(const std::vector<TraceEvent>& trace,
                                            const Lemma& lemma, const KeyRegistry& registry);

}  // namespace aggsig
