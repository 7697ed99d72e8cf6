#include "aggsig/scenario_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace aggsig {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ScenarioParseError(origin + ": " + what);
}

}  // namespace

ScenarioSpec parse_scenario(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin, e.what());
  }
  if (!j.is_object()) fail(origin, "top level must be an object");
  if (j.value("version", "") != "scenario-v1")
    fail(origin, "missing or unsupported version (want \"scenario-v1\")");

  ScenarioSpec spec;
  auto kind = parse_protocol_kind(j.value("protocol", ""));
  if (!kind) fail(origin, "unknown protocol " + j.value("protocol", "<missing>"));
  spec.protocol = *kind;
  spec.name = j.value("name", j.value("protocol", "scenario"));

  if (!j.contains("roles") || !j["roles"].is_array() || j["roles"].empty())
    fail(origin, "field roles: nonempty array required");
  for (const auto& r : j["roles"]) {
    RoleSpec role;
    role.role = r.value("role", "");
    role.identity = r.value("id", "");
    role.sessions = r.value("sessions", 1);
    if (role.role.empty()) fail(origin, "field roles[].role: required");
    if (role.identity.empty()) fail(origin, "field roles[].id: required");
    if (role.sessions < 0) fail(origin, "field roles[].sessions: must be >= 0");
    spec.roles.push_back(std::move(role));
  }
  if (j.contains("compromised")) {
    for (const auto& c : j["compromised"]) spec.compromised.push_back(c.get<std::string>());
  }
  if (j.contains("toggles")) {
    const auto& t = j["toggles"];
    std::string init = t.value("verifier_init", "owner-identity");
    if (init == "none") {
      spec.toggles.verifier_init = ScenarioToggles::VerifierInit::None;
    } else if (init == "owner-identity") {
      spec.toggles.verifier_init = ScenarioToggles::VerifierInit::OwnerIdentity;
    } else {
      fail(origin, "field toggles.verifier_init: want none|owner-identity");
    }
    spec.toggles.dishonest_keys_in_apk = t.value("dishonest_keys_in_apk", false);
    spec.toggles.rogue_registration = t.value("rogue_registration", true);
  }
  Bounds defaults = spec.protocol == ProtocolKind::SanaFull
                        ? sana_scenario(spec.toggles.verifier_init,
                                        spec.toggles.dishonest_keys_in_apk,
                                        spec.toggles.rogue_registration, false)
                              .bounds
                    : spec.protocol == ProtocolKind::TokenRequest
                        ? token_request_scenario(spec.toggles.verifier_init).bounds
                        : toy_scenario().bounds;
  spec.bounds = defaults;
  if (j.contains("bounds")) {
    const auto& b = j["bounds"];
    spec.bounds.max_sessions_per_role = b.value("max_sessions_per_role", defaults.max_sessions_per_role);
    spec.bounds.max_agg_size = b.value("max_agg_size", defaults.max_agg_size);
    spec.bounds.deduction_depth = b.value("deduction_depth", defaults.deduction_depth);
    spec.bounds.max_trace_length = b.value("max_trace_length", defaults.max_trace_length);
    spec.bounds.adv_aggregations = b.value("adv_aggregations", defaults.adv_aggregations);
    spec.bounds.dishonest_keys = b.value("dishonest_keys", defaults.dishonest_keys);
    spec.bounds.rogue_keys = b.value("rogue_keys", defaults.rogue_keys);
  }
  for (const RoleSpec& r : spec.roles) {
    if (r.sessions > spec.bounds.max_sessions_per_role) {
      fail(origin, "field roles[].sessions: " + r.identity + " exceeds max_sessions_per_role");
    }
  }
  return spec;
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string scenario_to_json(const ScenarioSpec& spec) {
  json j;
  j["version"] = "scenario-v1";
  j["name"] = spec.name;
  j["protocol"] = protocol_kind_name(spec.protocol);
  json roles = json::array();
  for (const RoleSpec& r : spec.roles) {
    roles.push_back({{"role", r.role}, {"id", r.identity}, {"sessions", r.sessions}});
  }
  j["roles"] = roles;
  if (!spec.compromised.empty()) j["compromised"] = spec.compromised;
  j["toggles"] = {
      {"verifier_init",
       spec.toggles.verifier_init == ScenarioToggles::VerifierInit::None ? "none"
                                                                         : "owner-identity"},
      {"dishonest_keys_in_apk", spec.toggles.dishonest_keys_in_apk},
      {"rogue_registration", spec.toggles.rogue_registration},
  };
  j["bounds"] = {
      {"max_sessions_per_role", spec.bounds.max_sessions_per_role},
      {"max_agg_size", spec.bounds.max_agg_size},
      {"deduction_depth", spec.bounds.deduction_depth},
      {"max_trace_length", spec.bounds.max_trace_length},
      {"adv_aggregations", spec.bounds.adv_aggregations},
      {"dishonest_keys", spec.bounds.dishonest_keys},
      {"rogue_keys", spec.bounds.rogue_keys},
  };
  return j.dump(2) + "\n";
}

}  // namespace aggsig
