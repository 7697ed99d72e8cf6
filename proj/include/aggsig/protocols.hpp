// Scenarios and role machines: the signer/aggregator/verifier example
// protocol, the SANA Token Request subprotocol, and the full SANA
// attestation flow, plus the scripted attack schedules used both as
// counterexample generators and as golden regression traces.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "aggsig/explorer.hpp"

namespace aggsig {

enum class ProtocolKind { Toy, TokenRequest, SanaFull };

std::string protocol_kind_name(ProtocolKind k);
std::optional<ProtocolKind> parse_protocol_kind(const std::string& name);

struct ScenarioToggles {
  enum class VerifierInit { None, OwnerIdentity };
  VerifierInit verifier_init = VerifierInit::OwnerIdentity;
  bool dishonest_keys_in_apk = false;
  bool rogue_registration = true;
};

struct RoleSpec {
  std::string role;
  std::string identity;
  int sessions = 1;
};

struct ScenarioSpec {
  std::string name;
  ProtocolKind protocol = ProtocolKind::Toy;
  std::vector<RoleSpec> roles;
  ScenarioToggles toggles;
  std::vector<std::string> compromised;  // identities whose keys the adversary holds
  Bounds bounds;
};

std::unique_ptr<Protocol> make_protocol(const ScenarioSpec& spec);
std::unique_ptr<Protocol> make_toy_protocol(ScenarioSpec spec);
std::unique_ptr<Protocol> make_sana_protocol(ScenarioSpec spec);

// Built-in scenarios mirroring the analysis configurations.
ScenarioSpec toy_scenario();
ScenarioSpec token_request_scenario(ScenarioToggles::VerifierInit init);
// with_oracles adds the supporting verifier identities the signing-oracle
// forgery chain needs; proofs run without them at one session per role.
ScenarioSpec sana_scenario(ScenarioToggles::VerifierInit init, bool dishonest_in_apk,
                           bool rogue, bool with_oracles);

// Lemma catalogs per protocol, in table order.
std::vector<Lemma> toy_lemmas();
std::vector<Lemma> token_request_lemmas();
std::vector<Lemma> sana_lemmas();
std::optional<Lemma> find_lemma(ProtocolKind kind, const std::string& name);

// A scripted attack: a fixed adversary schedule for a specific scenario,
// model, and lemma. Replaying it through the explorer must yield a
// Falsified verdict for exactly its target configuration.
struct ScriptedAttack {
  std::string name;
  std::string description;
  ScenarioSpec scenario;
  ModelId model;
  Lemma lemma;
  std::vector<Action> schedule;
};

ScriptedAttack scripted_attack(const std::string& name);
std::vector<std::string> scripted_attack_names();

// Scripted schedules compatible with a given matrix cell, tried before
// exhaustive search when hunting counterexamples.
std::vector<ScriptedAttack> scripted_attacks_for(ProtocolKind kind,
                                                 const ScenarioSpec& scenario,
                                                 ModelId model, const Lemma& lemma);

}  // namespace aggsig
