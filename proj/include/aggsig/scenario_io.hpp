// scenario-v1 documents: JSON files describing a protocol instance
// (roles, toggles, bounds) the explore command can run.
#pragma once

#include <stdexcept>
#include <string>

#include "aggsig/protocols.hpp"

namespace aggsig {

struct ScenarioParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ScenarioSpec load_scenario(const std::string& path);
ScenarioSpec parse_scenario(const std::string& text, const std::string& origin);
std::string scenario_to_json(const ScenarioSpec& spec);

}  // namespace aggsig
