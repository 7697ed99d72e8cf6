#include "aggsig/matrix.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <functional>
#include <future>
#include <sstream>
#include <stdexcept>

namespace aggsig {

namespace {

// expected verdicts; F = falsified, P = bounded-safe
struct ExpectedRow {
  const char* row;
  const char* verdicts;  // one char per column
};

constexpr ExpectedRow kToyExpected[] = {
    // columns: message-authenticity, weak-agreement, no-splitting-zero, no-rogue-key
    {"v1", "PFPP"},
    {"v2", "PFFP"},
    {"v3", "FFFF"},
    {"a4", "PFPP"},
    {"a5", "PFFP"},
    {"a6", "FFPF"},
};

constexpr ExpectedRow kTokenRequestExpected[] = {
    // columns: none, owner-identity
    {"aliveness-owner", "PP"},
    {"aliveness-verifier", "FP"},
    {"weak-agreement-owner", "FF"},
    {"weak-agreement-verifier", "FF"},
};

constexpr ExpectedRow kSanaExpected[] = {
    // columns: init-none, init-owner-identity, dishonest-apk, rogue-apk
    {"attestation-agreement", "FPPF"},
    {"token-agreement", "PPPP"},
};

}  // namespace

void apply_bounds_overrides(Bounds& bounds, const std::map<std::string, int>& overrides) {
  for (const auto& [key, value] : overrides) {
    if (key == "max_sessions_per_role") bounds.max_sessions_per_role = value;
    else if (key == "max_agg_size") bounds.max_agg_size = value;
    else if (key == "deduction_depth") bounds.deduction_depth = value;
    else if (key == "max_trace_length") bounds.max_trace_length = value;
    else if (key == "adv_aggregations") bounds.adv_aggregations = value;
    else if (key == "dishonest_keys") bounds.dishonest_keys = value;
    else if (key == "rogue_keys") bounds.rogue_keys = value;
    else throw std::invalid_argument("unknown bounds key: " + key);
  }
}

namespace {

void merge_stats(InstrumentationStats& into, const InstrumentationStats& from) {
  into.vfy_queries += from.vfy_queries;
  into.oracle_branches += from.oracle_branches;
  into.memo_conflicts += from.memo_conflicts;
  into.correctness_violations += from.correctness_violations;
  into.unforgeability_violations += from.unforgeability_violations;
  into.disallowed_results += from.disallowed_results;
}

struct CellOutcome {
  bool falsified = false;
  std::string source;
  std::uint64_t states = 0;
  std::vector<TraceEvent> trace;
  InstrumentationStats stats;
};

// counterexample hunt order: scripted schedules first, then exhaustive
// search on the attack scenario; proofs additionally walk randomized
// schedules
CellOutcome run_cell(const ScenarioSpec& attack_scenario, const ScenarioSpec& proof_scenario,
                     ModelId model, const Lemma& lemma, const MatrixOptions& options,
                     bool randomized_proof) {
  CellOutcome out;
  for (const ScriptedAttack& atk : scripted_attacks_for(attack_scenario.protocol,
                                                        attack_scenario, model, lemma)) {
    auto protocol = make_protocol(atk.scenario);
    Explorer explorer(*protocol, model, lemma, atk.scenario.bounds);
    ExploreResult r = explorer.replay(atk.schedule);
    merge_stats(out.stats, r.stats);
    if (r.verdict.falsified) {
      out.falsified = true;
      out.source = "script:" + atk.name;
      out.states = r.verdict.states_explored;
      out.trace = std::move(r.verdict.trace);
      return out;
    }
  }
  {
    auto protocol = make_protocol(proof_scenario);
    Explorer explorer(*protocol, model, lemma, proof_scenario.bounds);
    ExploreResult r = explorer.run();
    merge_stats(out.stats, r.stats);
    out.states += r.verdict.states_explored;
    if (r.verdict.falsified) {
      out.falsified = true;
      out.source = "explore";
      out.trace = std::move(r.verdict.trace);
      return out;
    }
  }
  if (randomized_proof && options.random_walks > 0) {
    auto protocol = make_protocol(proof_scenario);
    Explorer explorer(*protocol, model, lemma, proof_scenario.bounds);
    ExploreResult r = explorer.randomized(options.seed, options.random_walks);
    merge_stats(out.stats, r.stats);
    out.states += r.verdict.states_explored;
    if (r.verdict.falsified) {
      out.falsified = true;
      out.source = "random";
      out.trace = std::move(r.verdict.trace);
      return out;
    }
    out.source = "search+random";
  } else {
    out.source = "explore";
  }
  return out;
}

void run_cells(std::vector<std::function<void()>> jobs, int parallel) {
  if (parallel <= 1) {
    for (auto& job : jobs) job();
    return;
  }
  // fixed partition keeps the result assembly deterministic
  std::vector<std::future<void>> futures;
  std::atomic<std::size_t> next{0};
  for (int w = 0; w < parallel; ++w) {
    futures.push_back(std::async(std::launch::async, [&jobs, &next] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= jobs.size()) break;
        jobs[i]();
      }
    }));
  }
  for (auto& f : futures) f.get();
}

}  // namespace

bool MatrixResult::all_match() const {
  return std::all_of(cells.begin(), cells.end(),
                     [](const MatrixCell& c) { return c.matches(); });
}

const MatrixCell& MatrixResult::cell(const std::string& row, const std::string& col) const {
  for (const MatrixCell& c : cells) {
    if (c.row == row && c.col == col) return c;
  }
  throw std::out_of_range("no cell " + row + "/" + col);
}

std::string MatrixResult::render_text() const {
  std::size_t row_width = 8;
  for (const auto& r : row_labels) row_width = std::max(row_width, r.size());
  std::vector<std::size_t> col_widths;
  for (const auto& c : col_labels) col_widths.push_back(std::max<std::size_t>(c.size(), 12));

  std::ostringstream os;
  os << "protocol: " << protocol << "\n";
  os << std::string(row_width, ' ');
  for (std::size_t j = 0; j < col_labels.size(); ++j) {
    os << "  " << col_labels[j]
       << std::string(col_widths[j] - col_labels[j].size(), ' ');
  }
  os << "\n";
  for (const auto& r : row_labels) {
    os << r << std::string(row_width - r.size(), ' ');
    for (std::size_t j = 0; j < col_labels.size(); ++j) {
      const MatrixCell& c = cell(r, col_labels[j]);
      std::string v = c.falsified ? "falsified" : "bounded-safe";
      if (!c.matches()) v += "(!)";
      std::size_t pad = col_widths[j] >= v.size() ? col_widths[j] - v.size() : 0;
      os << "  " << v << std::string(pad, ' ');
    }
    os << "\n";
  }
  os << (all_match() ? "all cells match the expected table\n"
                     : "MISMATCH against the expected table\n");
  return os.str();
}

std::string MatrixResult::render_json() const {
  std::ostringstream os;
  for (const MatrixCell& c : cells) {
    nlohmann::json j;
    j["schema"] = "matrix-v1";
    j["protocol"] = protocol;
    j["row"] = c.row;
    j["col"] = c.col;
    j["models"] = c.models;
    j["verdict"] = c.falsified ? "falsified" : "bounded-safe";
    j["expected"] = c.expected_falsified ? "falsified" : "bounded-safe";
    j["match"] = c.matches();
    j["source"] = c.source;
    j["states"] = c.states;
    os << j.dump() << "\n";
    for (const TraceEvent& e : c.trace) os << e.render_json() << "\n";
  }
  return os.str();
}

MatrixResult run_matrix_toy(const MatrixOptions& options) {
  MatrixResult result;
  result.protocol = "toy";
  std::vector<Lemma> lemmas = toy_lemmas();
  for (const Lemma& l : lemmas) result.col_labels.push_back(l.name);
  for (const ExpectedRow& row : kToyExpected) result.row_labels.push_back(row.row);

  ScenarioSpec scenario = toy_scenario();
  apply_bounds_overrides(scenario.bounds, options.bounds_overrides);
  result.cells.resize(std::size(kToyExpected) * lemmas.size());
  std::vector<std::function<void()>> jobs;
  for (std::size_t i = 0; i < std::size(kToyExpected); ++i) {
    ModelId model = *parse_model(kToyExpected[i].row);
    for (std::size_t j = 0; j < lemmas.size(); ++j) {
      MatrixCell& cell = result.cells[i * lemmas.size() + j];
      cell.row = kToyExpected[i].row;
      cell.col = lemmas[j].name;
      cell.models = {model_name(model)};
      cell.expected_falsified = kToyExpected[i].verdicts[j] == 'F';
      jobs.push_back([&cell, scenario, model, lemma = lemmas[j], options] {
        auto protocol = make_protocol(scenario);
        Explorer explorer(*protocol, model, lemma, scenario.bounds);
        ExploreResult r = explorer.run();
        cell.falsified = r.verdict.falsified;
        cell.source = "explore";
        cell.states = r.verdict.states_explored;
        cell.trace = std::move(r.verdict.trace);
        cell.cell_stats = r.stats;
      });
    }
  }
  run_cells(std::move(jobs), options.parallel);
  for (const MatrixCell& c : result.cells) merge_stats(result.stats, c.cell_stats);
  return result;
}

MatrixResult run_matrix_token_request(const MatrixOptions& options) {
  MatrixResult result;
  result.protocol = "token-request";
  result.col_labels = {"none", "owner-identity"};
  std::vector<Lemma> lemmas = token_request_lemmas();
  for (const ExpectedRow& row : kTokenRequestExpected) result.row_labels.push_back(row.row);

  result.cells.resize(lemmas.size() * 2);
  std::vector<std::function<void()>> jobs;
  for (std::size_t i = 0; i < lemmas.size(); ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      auto init = j == 0 ? ScenarioToggles::VerifierInit::None
                         : ScenarioToggles::VerifierInit::OwnerIdentity;
      ScenarioSpec scenario = token_request_scenario(init);
      apply_bounds_overrides(scenario.bounds, options.bounds_overrides);
      MatrixCell& cell = result.cells[i * 2 + j];
      cell.row = lemmas[i].name;
      cell.col = result.col_labels[j];
      cell.models = {"a4"};
      cell.expected_falsified = kTokenRequestExpected[i].verdicts[j] == 'F';
      jobs.push_back([&cell, scenario, lemma = lemmas[i], options] {
        CellOutcome out = run_cell(scenario, scenario, ModelId::A4_Plain, lemma, options,
                                   /*randomized_proof=*/false);
        cell.falsified = out.falsified;
        cell.source = out.source;
        cell.states = out.states;
        cell.trace = std::move(out.trace);
        cell.cell_stats = out.stats;
      });
    }
  }
  run_cells(std::move(jobs), options.parallel);
  for (const MatrixCell& c : result.cells) merge_stats(result.stats, c.cell_stats);
  return result;
}

MatrixResult run_matrix_sana(const MatrixOptions& options) {
  MatrixResult result;
  result.protocol = "sana";
  result.col_labels = {"init-none", "init-owner-identity", "dishonest-apk", "rogue-apk"};
  std::vector<Lemma> lemmas = sana_lemmas();
  for (const ExpectedRow& row : kSanaExpected) result.row_labels.push_back(row.row);

  struct ClassSpec {
    ScenarioSpec attack;
    ScenarioSpec proof;
    std::vector<ModelId> models;
  };
  using VI = ScenarioToggles::VerifierInit;
  std::vector<ClassSpec> classes;
  classes.push_back({sana_scenario(VI::None, false, false, true),
                     sana_scenario(VI::None, false, false, false),
                     {ModelId::A4_Plain}});
  classes.push_back({sana_scenario(VI::OwnerIdentity, false, false, false),
                     sana_scenario(VI::OwnerIdentity, false, false, false),
                     {ModelId::V1_NoDishonest, ModelId::V2_Dishonest, ModelId::V3_RogueKey,
                      ModelId::A4_Plain, ModelId::A5_Colliding, ModelId::A6_RogueKey}});
  classes.push_back({sana_scenario(VI::OwnerIdentity, true, false, false),
                     sana_scenario(VI::OwnerIdentity, true, false, false),
                     {ModelId::V1_NoDishonest, ModelId::V2_Dishonest, ModelId::A4_Plain,
                      ModelId::A5_Colliding}});
  classes.push_back({sana_scenario(VI::OwnerIdentity, true, true, false),
                     sana_scenario(VI::OwnerIdentity, true, true, false),
                     {ModelId::V3_RogueKey, ModelId::A6_RogueKey}});
  for (ClassSpec& cls : classes) {
    apply_bounds_overrides(cls.attack.bounds, options.bounds_overrides);
    apply_bounds_overrides(cls.proof.bounds, options.bounds_overrides);
  }

  result.cells.resize(lemmas.size() * classes.size());
  std::vector<std::function<void()>> jobs;
  for (std::size_t i = 0; i < lemmas.size(); ++i) {
    for (std::size_t j = 0; j < classes.size(); ++j) {
      MatrixCell& cell = result.cells[i * classes.size() + j];
      cell.row = lemmas[i].name;
      cell.col = result.col_labels[j];
      for (ModelId m : classes[j].models) cell.models.push_back(model_name(m));
      cell.expected_falsified = kSanaExpected[i].verdicts[j] == 'F';
      jobs.push_back([&cell, cls = classes[j], lemma = lemmas[i], options] {
        // a class is falsified if any of its theories admits a violation
        for (ModelId m : cls.models) {
          CellOutcome out = run_cell(cls.attack, cls.proof, m, lemma, options,
                                     /*randomized_proof=*/true);
          merge_stats(cell.cell_stats, out.stats);
          cell.states += out.states;
          if (out.falsified) {
            cell.falsified = true;
            cell.source = out.source + " (" + model_name(m) + ")";
            cell.trace = std::move(out.trace);
            return;
          }
        }
        cell.falsified = false;
        cell.source = "search+random";
      });
    }
  }
  run_cells(std::move(jobs), options.parallel);
  for (const MatrixCell& c : result.cells) merge_stats(result.stats, c.cell_stats);
  return result;
}

MatrixResult run_matrix(ProtocolKind kind, const MatrixOptions& options) {
  switch (kind) {
    case ProtocolKind::Toy: return run_matrix_toy(options);
    case ProtocolKind::TokenRequest: return run_matrix_token_request(options);
    case ProtocolKind::SanaFull: return run_matrix_sana(options);
  }
  throw std::invalid_argument("unknown protocol kind");
}

}  // namespace aggsig
