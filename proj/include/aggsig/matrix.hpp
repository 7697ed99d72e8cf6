// Verdict matrices for the three analyses, with the known-good expected
// tables embedded for regression checking.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "aggsig/protocols.hpp"

namespace aggsig {

struct MatrixOptions {
  std::uint64_t seed = 1;
  int random_walks = 10000;  // per proven cell in the sana matrix
  int parallel = 1;          // worker threads across cells
  bool collect_stats = true;
  std::map<std::string, int> bounds_overrides;  // key=value from the CLI
};

// Applies recognized override keys (max_agg_size, deduction_depth, ...) to
// a scenario's bounds; unknown keys throw std::invalid_argument.
void apply_bounds_overrides(Bounds& bounds, const std::map<std::string, int>& overrides);

struct MatrixCell {
  std::string row;
  std::string col;
  std::vector<std::string> models;  // theories exercised for this cell
  bool falsified = false;
  bool expected_falsified = false;
  std::string source;  // "explore", "script:<name>", "search+random"
  std::uint64_t states = 0;
  std::vector<TraceEvent> trace;  // counterexample when falsified
  InstrumentationStats cell_stats;

  bool matches() const { return falsified == expected_falsified; }
};

struct MatrixResult {
  std::string protocol;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<MatrixCell> cells;
  InstrumentationStats stats;

  bool all_match() const;
  const MatrixCell& cell(const std::string& row, const std::string& col) const;
  std::string render_text() const;
  std::string render_json() const;  // line-delimited objects
};

MatrixResult run_matrix_toy(const MatrixOptions& options);
MatrixResult run_matrix_token_request(const MatrixOptions& options);
MatrixResult run_matrix_sana(const MatrixOptions& options);
MatrixResult run_matrix(ProtocolKind kind, const MatrixOptions& options);

}  // namespace aggsig
