// Scripted adversary schedules. Each one fixes the exact interleaving
// behind a known counterexample; replaying it through the explorer
// re-validates every step and doubles as a golden-trace regression.
#include <algorithm>
#include <stdexcept>

#include "aggsig/protocols.hpp"

namespace aggsig {

std::string protocol_kind_name(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::Toy: return "toy";
    case ProtocolKind::TokenRequest: return "token-request";
    case ProtocolKind::SanaFull: return "sana";
  }
  return "?";
}

std::optional<ProtocolKind> parse_protocol_kind(const std::string& name) {
  if (name == "toy") return ProtocolKind::Toy;
  if (name == "token-request") return ProtocolKind::TokenRequest;
  if (name == "sana") return ProtocolKind::SanaFull;
  return std::nullopt;
}

std::unique_ptr<Protocol> make_protocol(const ScenarioSpec& spec) {
  switch (spec.protocol) {
    case ProtocolKind::Toy: return make_toy_protocol(spec);
    case ProtocolKind::TokenRequest:
    case ProtocolKind::SanaFull: return make_sana_protocol(spec);
  }
  throw std::invalid_argument("unknown protocol");
}

std::optional<Lemma> find_lemma(ProtocolKind kind, const std::string& name) {
  std::vector<Lemma> all;
  switch (kind) {
    case ProtocolKind::Toy: all = toy_lemmas(); break;
    case ProtocolKind::TokenRequest: all = token_request_lemmas(); break;
    case ProtocolKind::SanaFull: all = sana_lemmas(); break;
  }
  for (const Lemma& l : all) {
    if (l.name == name) return l;
  }
  return std::nullopt;
}

namespace {

int session_index(const ScenarioSpec& spec, const std::string& identity, int session) {
  int idx = 0;
  for (const RoleSpec& r : spec.roles) {
    for (int s = 0; s < r.sessions; ++s) {
      if (r.identity == identity && s == session) return idx;
      ++idx;
    }
  }
  throw std::invalid_argument("no session " + identity + "#" + std::to_string(session));
}

Action step(const ScenarioSpec& spec, const std::string& identity, int session,
            const std::string& step_name, std::vector<Term> args = {}) {
  Action a;
  a.kind = Action::Kind::RoleStep;
  a.session = session_index(spec, identity, session);
  a.step = step_name;
  a.args = std::move(args);
  return a;
}

Action adv(AdvRule rule, std::vector<Term> args = {}) {
  Action a;
  a.kind = Action::Kind::AdvRule;
  a.rule = rule;
  a.args = std::move(args);
  return a;
}

Term name(const char* s) { return Term::public_name(s); }
Term sk_of(const std::string& id) { return Term::nonce("sk" + id); }
Term pk_of(const std::string& id) { return Term::pk(sk_of(id)); }
Term nv(const std::string& id, int s) {
  return Term::nonce("nv." + id + "." + std::to_string(s));
}
Term no(const std::string& id, int s) {
  return Term::nonce("no." + id + "." + std::to_string(s));
}
Term token_body_sig(const std::string& owner) {
  return Term::sign(Term::tuple({name("goodhw"), name("c0"), name("t0")}), sk_of(owner));
}
Term token_of(const std::string& owner) {
  return Term::tuple({name("token"), name("goodhw"), name("c0"), name("t0"),
                      token_body_sig(owner)});
}

// signing-oracle invocation: the verifier session initiates, the
// adversary answers with its own term, the verifier signs it
void so(std::vector<Action>& out, const ScenarioSpec& spec, const std::string& id,
        int session, const Term& x) {
  out.push_back(step(spec, id, session, "v-start"));
  out.push_back(step(spec, id, session, "v-sign", {x}));
}

ScriptedAttack build_signing_oracle() {
  ScriptedAttack atk;
  atk.name = "signing-oracle";
  atk.description =
      "a verifier that initiates a run signs an arbitrary adversary-chosen term";
  atk.scenario = token_request_scenario(ScenarioToggles::VerifierInit::None);
  atk.model = ModelId::A4_Plain;
  atk.lemma = *find_lemma(ProtocolKind::TokenRequest, "aliveness-owner");
  so(atk.schedule, atk.scenario, "V2", 0, name("xA"));
  return atk;
}

ScriptedAttack build_aliveness_verifier() {
  ScriptedAttack atk;
  atk.name = "aliveness-verifier";
  atk.description =
      "with no verifier initialization, the token and apk signature are forged "
      "through another verifier's signing oracle; the verifier completes with no "
      "owner present";
  atk.scenario = token_request_scenario(ScenarioToggles::VerifierInit::None);
  atk.model = ModelId::A4_Plain;
  atk.lemma = *find_lemma(ProtocolKind::TokenRequest, "aliveness-verifier");
  const ScenarioSpec& sc = atk.scenario;
  Term fake_apk = Term::tuple({name("apk"), name("apkAdv")});
  atk.schedule.push_back(step(sc, "V", 0, "v-start"));
  atk.schedule.push_back(step(sc, "V", 0, "v-sign", {name("xA")}));
  so(atk.schedule, sc, "V2", 0, Term::tuple({name("goodhw"), name("c0"), name("t0")}));
  so(atk.schedule, sc, "V2", 1, Term::tuple({nv("V", 0), fake_apk}));
  Term sig_ok = Term::sign(Term::tuple({nv("V", 0), fake_apk}), sk_of("V2"));
  atk.schedule.push_back(
      step(sc, "V", 0, "v-finish", {token_of("V2"), fake_apk, sig_ok, name("V2")}));
  return atk;
}

ScriptedAttack build_weak_agreement_verifier(ScenarioToggles::VerifierInit init) {
  ScriptedAttack atk;
  atk.name = "weak-agreement-verifier";
  atk.description =
      "the owner issues the token to the compromised verifier; the adversary "
      "re-encrypts it for the target verifier, which accepts a run the owner "
      "never intended for it";
  atk.scenario = token_request_scenario(init);
  atk.model = ModelId::A4_Plain;
  atk.lemma = *find_lemma(ProtocolKind::TokenRequest, "weak-agreement-verifier");
  const ScenarioSpec& sc = atk.scenario;
  Term apk_o1 = Term::tuple({name("apk"), name("devicesO1")});
  atk.schedule.push_back(step(sc, "V", 0, "v-start"));
  atk.schedule.push_back(step(sc, "V", 0, "v-sign", {name("xA")}));
  atk.schedule.push_back(step(sc, "O1", 0, "o-start", {nv("V", 0)}));
  atk.schedule.push_back(
      step(sc, "O1", 0, "o-issue", {Term::sign(no("O1", 0), sk_of("E")), name("E")}));
  Term sig_ok = Term::sign(Term::tuple({nv("V", 0), apk_o1}), sk_of("O1"));
  atk.schedule.push_back(
      step(sc, "V", 0, "v-finish", {token_of("O1"), apk_o1, sig_ok, name("O1")}));
  return atk;
}

ScriptedAttack build_weak_agreement_owner(ScenarioToggles::VerifierInit init) {
  ScriptedAttack atk;
  atk.name = "weak-agreement-owner";
  atk.description =
      "the adversary relays the verifier's handshake to a different owner, which "
      "completes a run the verifier never directed at it";
  atk.scenario = token_request_scenario(init);
  atk.model = ModelId::A4_Plain;
  atk.lemma = *find_lemma(ProtocolKind::TokenRequest, "weak-agreement-owner");
  const ScenarioSpec& sc = atk.scenario;
  atk.schedule.push_back(step(sc, "V", 0, "v-start"));
  atk.schedule.push_back(step(sc, "O2", 0, "o-start", {nv("V", 0)}));
  atk.schedule.push_back(step(sc, "V", 0, "v-sign", {no("O2", 0)}));
  atk.schedule.push_back(
      step(sc, "O2", 0, "o-issue", {Term::sign(no("O2", 0), sk_of("V")), name("V")}));
  return atk;
}

ScriptedAttack build_sana_forge_noinit() {
  ScriptedAttack atk;
  atk.name = "sana-forge-noinit";
  atk.description =
      "with no verifier initialization, the whole token request and the "
      "attestation response are forged through verifier signing oracles; the "
      "target verifier attests a network that was never measured";
  atk.scenario = sana_scenario(ScenarioToggles::VerifierInit::None, false, false,
                               /*with_oracles=*/true);
  atk.model = ModelId::A4_Plain;
  atk.lemma = *find_lemma(ProtocolKind::SanaFull, "attestation-agreement");
  const ScenarioSpec& sc = atk.scenario;
  Term fake_apk = Term::tuple({name("apk"), pk_of("V3")});
  atk.schedule.push_back(step(sc, "V", 0, "v-start"));
  atk.schedule.push_back(step(sc, "V", 0, "v-sign", {name("xA")}));
  so(atk.schedule, sc, "V2", 0, Term::tuple({name("goodhw"), name("c0"), name("t0")}));
  so(atk.schedule, sc, "V2", 1, Term::tuple({nv("V", 0), fake_apk}));
  Term sig_ok = Term::sign(Term::tuple({nv("V", 0), fake_apk}), sk_of("V2"));
  atk.schedule.push_back(
      step(sc, "V", 0, "v-finish", {token_of("V2"), fake_apk, sig_ok, name("V2")}));
  Term challenge_nonce = Term::nonce("ch.V.0");
  Term payload = Term::tuple({name("hgood"), challenge_nonce, name("c0")});
  so(atk.schedule, sc, "V3", 0, payload);
  atk.schedule.push_back(adv(AdvRule::AggregateValid, {Term::sign(payload, sk_of("V3"))}));
  Term agg = Term::valid_agg({{payload, pk_of("V3")}});
  Term claims = Term::tuple({Term::tuple({payload, name("V3")})});
  atk.schedule.push_back(step(sc, "V", 0, "v-attest", {agg, claims}));
  return atk;
}

ScriptedAttack build_sana_forge_rogue(ModelId model) {
  ScriptedAttack atk;
  atk.name = "sana-forge-rogue";
  atk.description =
      "with adversary keys admitted into the apk, a rogue public key registered "
      "against a target prover lets the adversary forge that prover's "
      "attestation response";
  atk.scenario = sana_scenario(ScenarioToggles::VerifierInit::OwnerIdentity,
                               /*dishonest_in_apk=*/true, /*rogue=*/true,
                               /*with_oracles=*/false);
  atk.model = model;
  atk.lemma = *find_lemma(ProtocolKind::SanaFull, "attestation-agreement");
  const ScenarioSpec& sc = atk.scenario;
  bool validation = is_validation_model(model);
  Term target = pk_of("P1");
  Term rogue = validation ? Term::pk(Term::rogue_sk(target)) : Term::rogue_pk(target);

  atk.schedule.push_back(adv(AdvRule::RegisterRogue, {target}));
  atk.schedule.push_back(step(sc, "V", 0, "v-start"));
  atk.schedule.push_back(step(sc, "O", 0, "o-start", {nv("V", 0)}));
  atk.schedule.push_back(step(sc, "V", 0, "v-sign", {no("O", 0)}));
  atk.schedule.push_back(
      step(sc, "O", 0, "o-issue", {Term::sign(no("O", 0), sk_of("V")), name("V")}));
  std::vector<Term> apk_keys{pk_of("P1"), pk_of("P2"), rogue};
  std::sort(apk_keys.begin(), apk_keys.end(), TermLess{});
  std::vector<Term> apk_args{name("apk")};
  apk_args.insert(apk_args.end(), apk_keys.begin(), apk_keys.end());
  Term apk = Term::tuple(std::move(apk_args));
  Term sig_ok = Term::sign(Term::tuple({nv("V", 0), apk}), sk_of("O"));
  atk.schedule.push_back(
      step(sc, "V", 0, "v-finish", {token_of("O"), apk, sig_ok, name("O")}));
  Term challenge_nonce = Term::nonce("ch.V.0");
  Term payload = Term::tuple({name("hgood"), challenge_nonce, name("c0")});
  atk.schedule.push_back(adv(AdvRule::RogueAggregate, {rogue, payload}));
  Term agg;
  Term claims;
  if (validation) {
    int tag = sc.bounds.adv_aggregations;  // budget value when the rule fires
    Term i1 = Term::public_name("i.rt" + std::to_string(tag));
    Term i2 = Term::public_name("i.rr" + std::to_string(tag));
    agg = Term::indexed_agg({{Term::sign(payload, sk_of("P1")), i1},
                             {Term::sign(payload, Term::rogue_sk(target)), i2}});
    claims = Term::tuple({Term::tuple({payload, name("P1"), i1}),
                          Term::tuple({payload, name("R1"), i2})});
  } else {
    agg = Term::rogue_agg({{payload, target}, {payload, rogue}});
    claims = Term::tuple({Term::tuple({payload, name("P1")}),
                          Term::tuple({payload, name("R1")})});
  }
  atk.schedule.push_back(step(sc, "V", 0, "v-attest", {agg, claims}));
  return atk;
}

}  // namespace

ScriptedAttack scripted_attack(const std::string& attack_name) {
  if (attack_name == "signing-oracle") return build_signing_oracle();
  if (attack_name == "aliveness-verifier") return build_aliveness_verifier();
  if (attack_name == "weak-agreement-verifier")
    return build_weak_agreement_verifier(ScenarioToggles::VerifierInit::OwnerIdentity);
  if (attack_name == "weak-agreement-owner")
    return build_weak_agreement_owner(ScenarioToggles::VerifierInit::OwnerIdentity);
  if (attack_name == "sana-forge-noinit") return build_sana_forge_noinit();
  if (attack_name == "sana-forge-rogue") return build_sana_forge_rogue(ModelId::A6_RogueKey);
  throw std::invalid_argument("unknown attack: " + attack_name);
}

std::vector<std::string> scripted_attack_names() {
  return {"signing-oracle",        "aliveness-verifier", "weak-agreement-verifier",
          "weak-agreement-owner",  "sana-forge-noinit",  "sana-forge-rogue"};
}

std::vector<ScriptedAttack> scripted_attacks_for(ProtocolKind kind,
                                                 const ScenarioSpec& scenario,
                                                 ModelId model, const Lemma& lemma) {
  std::vector<ScriptedAttack> out;
  if (kind == ProtocolKind::TokenRequest) {
    auto init = scenario.toggles.verifier_init;
    if (lemma.name == "aliveness-verifier" &&
        init == ScenarioToggles::VerifierInit::None) {
      out.push_back(build_aliveness_verifier());
    } else if (lemma.name == "weak-agreement-verifier") {
      out.push_back(build_weak_agreement_verifier(init));
    } else if (lemma.name == "weak-agreement-owner") {
      out.push_back(build_weak_agreement_owner(init));
    }
  } else if (kind == ProtocolKind::SanaFull && lemma.name == "attestation-agreement") {
    if (scenario.toggles.verifier_init == ScenarioToggles::VerifierInit::None &&
        model == ModelId::A4_Plain) {
      out.push_back(build_sana_forge_noinit());
    }
    if (scenario.toggles.dishonest_keys_in_apk && scenario.toggles.rogue_registration &&
        (model == ModelId::V3_RogueKey || model == ModelId::A6_RogueKey)) {
      out.push_back(build_sana_forge_rogue(model));
    }
  }
  return out;
}

}  // namespace aggsig
