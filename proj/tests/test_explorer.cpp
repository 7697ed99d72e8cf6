#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "aggsig/matrix.hpp"
#include "aggsig/protocols.hpp"

using namespace aggsig;

namespace {

ExploreResult explore_toy(ModelId model, const std::string& lemma_name) {
  ScenarioSpec scenario = toy_scenario();
  auto protocol = make_protocol(scenario);
  Explorer explorer(*protocol, model, *find_lemma(ProtocolKind::Toy, lemma_name),
                    scenario.bounds);
  return explorer.run();
}

std::string render_trace(const std::vector<TraceEvent>& trace) {
  std::ostringstream os;
  for (const TraceEvent& e : trace) os << e.render() << "\n";
  return os.str();
}

}  // namespace

TEST_CASE("weak agreement falsifies in every model") {
  for (ModelId m : kAllModels) {
    ExploreResult r = explore_toy(m, "weak-agreement");
    CHECK(r.verdict.falsified);
    CHECK(r.stats.clean());
  }
}

TEST_CASE("splitting-zero lemma across models") {
  CHECK_FALSE(explore_toy(ModelId::A4_Plain, "no-splitting-zero").verdict.falsified);
  CHECK(explore_toy(ModelId::A5_Colliding, "no-splitting-zero").verdict.falsified);
  CHECK_FALSE(explore_toy(ModelId::A6_RogueKey, "no-splitting-zero").verdict.falsified);
  CHECK_FALSE(explore_toy(ModelId::V1_NoDishonest, "no-splitting-zero").verdict.falsified);
  CHECK(explore_toy(ModelId::V2_Dishonest, "no-splitting-zero").verdict.falsified);
}

TEST_CASE("message authenticity and rogue key lemmas") {
  CHECK_FALSE(explore_toy(ModelId::A4_Plain, "message-authenticity").verdict.falsified);
  CHECK(explore_toy(ModelId::A6_RogueKey, "message-authenticity").verdict.falsified);
  CHECK(explore_toy(ModelId::V3_RogueKey, "message-authenticity").verdict.falsified);
  CHECK_FALSE(explore_toy(ModelId::V2_Dishonest, "no-rogue-key").verdict.falsified);
  CHECK(explore_toy(ModelId::A6_RogueKey, "no-rogue-key").verdict.falsified);
}

TEST_CASE("exploration is deterministic") {
  ExploreResult a = explore_toy(ModelId::A5_Colliding, "no-splitting-zero");
  ExploreResult b = explore_toy(ModelId::A5_Colliding, "no-splitting-zero");
  REQUIRE(a.verdict.falsified);
  REQUIRE(b.verdict.falsified);
  CHECK(render_trace(a.verdict.trace) == render_trace(b.verdict.trace));
  CHECK(a.verdict.states_explored == b.verdict.states_explored);
}

TEST_CASE("counterexamples replay as violations") {
  for (ModelId m : {ModelId::V2_Dishonest, ModelId::A5_Colliding, ModelId::A6_RogueKey}) {
    for (const char* lemma_name : {"weak-agreement", "no-splitting-zero",
                                   "message-authenticity", "no-rogue-key"}) {
      ExploreResult r = explore_toy(m, lemma_name);
      if (!r.verdict.falsified) continue;
      ScenarioSpec scenario = toy_scenario();
      auto protocol = make_protocol(scenario);
      Lemma lemma = *find_lemma(ProtocolKind::Toy, lemma_name);
      // rebuild the registry exactly as the violating run saw it
      Explorer ex(*protocol, m, lemma, scenario.bounds);
      ExploreState st = ex.initial_state(nullptr);
      KeyRegistry registry = st.registry;
      for (const TraceEvent& e : r.verdict.trace) {
        if (e.kind == EventKind::RegisterDishonest && e.actor == "adversary") {
          registry.register_dishonest("replay-" + std::to_string(e.position), e.term);
        } else if (e.kind == EventKind::RegisterRogue) {
          registry.register_rogue("replay-" + std::to_string(e.position), e.term, e.aux);
        }
      }
      CHECK(lemma_violated(r.verdict.trace, lemma, registry));
    }
  }
}

TEST_CASE("monotonicity: larger bounds preserve falsification") {
  ScenarioSpec scenario = toy_scenario();
  scenario.bounds.max_trace_length += 6;
  scenario.bounds.adv_aggregations += 1;
  auto protocol = make_protocol(scenario);
  Explorer explorer(*protocol, ModelId::A5_Colliding,
                    *find_lemma(ProtocolKind::Toy, "no-splitting-zero"), scenario.bounds);
  CHECK(explorer.run().verdict.falsified);
}

TEST_CASE("oracle choices stay within the allowed set across exploration") {
  for (ModelId m : {ModelId::V1_NoDishonest, ModelId::V2_Dishonest, ModelId::V3_RogueKey}) {
    for (const char* lemma_name : {"message-authenticity", "no-splitting-zero"}) {
      ExploreResult r = explore_toy(m, lemma_name);
      CHECK(r.stats.disallowed_results == 0);
      CHECK(r.stats.memo_conflicts == 0);
      CHECK(r.stats.correctness_violations == 0);
      if (m != ModelId::V3_RogueKey) CHECK(r.stats.unforgeability_violations == 0);
    }
  }
}

TEST_CASE("toy matrix matches the expected table") {
  MatrixOptions options;
  options.random_walks = 0;
  MatrixResult result = run_matrix_toy(options);
  CHECK(result.all_match());
  CHECK(result.stats.clean());
  // spot checks (validation rows, then attack-finding rows)
  CHECK_FALSE(result.cell("v1", "message-authenticity").falsified);
  CHECK(result.cell("v3", "no-rogue-key").falsified);
  CHECK(result.cell("a5", "no-splitting-zero").falsified);
  CHECK_FALSE(result.cell("a6", "no-splitting-zero").falsified);
  for (const MatrixCell& c : result.cells) {
    if (c.falsified) CHECK_FALSE(c.trace.empty());
  }
}

TEST_CASE("breadth-first search agrees on verdicts") {
  ScenarioSpec scenario = toy_scenario();
  auto protocol = make_protocol(scenario);
  for (auto [model, lemma_name, expect_falsified] :
       {std::tuple{ModelId::A5_Colliding, "no-splitting-zero", true},
        std::tuple{ModelId::A4_Plain, "no-splitting-zero", false},
        std::tuple{ModelId::A6_RogueKey, "message-authenticity", true}}) {
    Explorer bfs(*protocol, model, *find_lemma(ProtocolKind::Toy, lemma_name),
                 scenario.bounds, SearchOrder::BreadthFirst);
    CHECK(bfs.run().verdict.falsified == expect_falsified);
  }
}
