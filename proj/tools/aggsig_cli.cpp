// Command-line front end: verdict matrices, attack demonstrations, and
// raw scenario exploration.
//
//   aggsig matrix <toy|token-request|sana>   reproduce a verdict table
//   aggsig attack <name>                     run one attack end to end
//   aggsig explore <scenario.json>           explore one (model, lemma)
//
// Exit codes: matrix 0 = matches the embedded expected table; explore
// 0 = bounded-safe, 10 = falsified; 2 = usage or parse error.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "aggsig/aggregate.hpp"
#include "aggsig/matrix.hpp"
#include "aggsig/scenario_io.hpp"

using namespace aggsig;

namespace {

int env_parallelism() {
  const char* v = std::getenv("AGGSIG_PARALLEL");
  if (!v) return 1;
  int n = std::atoi(v);
  return n > 0 ? n : 1;
}

std::map<std::string, int> parse_bounds(const std::vector<std::string>& kvs) {
  std::map<std::string, int> out;
  for (const std::string& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--bounds expects key=value");
    out[kv.substr(0, eq)] = std::stoi(kv.substr(eq + 1));
  }
  return out;
}

void print_trace(const std::vector<TraceEvent>& trace, const std::string& format) {
  for (const TraceEvent& e : trace) {
    std::cout << (format == "structured" ? e.render_json() : "  " + e.render()) << "\n";
  }
}

// -- concrete algebra demonstrations ------------------------------------

int demo_rogue_key(std::uint64_t seed) {
  PairingContext ctx(kLargePrime);
  Rng rng(seed);
  KeyPair target = gen(ctx, rng);
  const std::string m = "approve transfer";
  RogueForgery forged = rogue_key_forge(ctx, target.pk, m, rng);
  std::printf("rogue public key attack, q = 2^61-1, seed %llu\n",
              static_cast<unsigned long long>(seed));
  std::printf("  target pk        = g1^%llu\n",
              static_cast<unsigned long long>(target.pk.exponent().value()));
  std::printf("  forger alpha     = %llu\n",
              static_cast<unsigned long long>(forged.alpha.value()));
  std::printf("  rogue pk         = g1^alpha / pk_target = g1^%llu\n",
              static_cast<unsigned long long>(forged.pk_rogue.exponent().value()));
  std::printf("  forged aggregate = H(m)^alpha = g0^%llu\n",
              static_cast<unsigned long long>(forged.sigma_agg.sigma_agg.exponent().value()));
  std::vector<std::string> msgs{m, m};
  std::vector<GroupElement> pks{target.pk, forged.pk_rogue};
  bool naive = vfy_agg_naive(ctx, forged.sigma_agg, msgs, pks);
  bool distinct = vfy_agg_distinct(ctx, forged.sigma_agg, msgs, pks);
  bool augmented = vfy_agg_augmented(ctx, forged.sigma_agg, msgs, pks);
  // no proof of possession for the rogue key is derivable without the
  // rogue secret; the forger's best candidate is H'(u)^alpha
  PopKey claim{forged.pk_rogue, exp(ctx.hash_prime_to_g0(forged.pk_rogue), forged.alpha)};
  bool pop = vfy_pop(ctx, claim);
  std::printf("  verifies for (m, m) under (pk_target, pk_rogue)?\n");
  std::printf("naive: %s, distinct: %s, augmented: %s, pop: %s\n",
              naive ? "ACCEPT" : "REJECT", distinct ? "ACCEPT" : "REJECT",
              augmented ? "ACCEPT" : "REJECT", pop ? "ACCEPT" : "REJECT");
  return (naive && !distinct && !augmented && !pop) ? 0 : 1;
}

int demo_splitting_zero(std::uint64_t seed) {
  PairingContext ctx(kLargePrime);
  Rng rng(seed);
  auto [sk1, sk2] = splitting_zero_keys(ctx, rng);
  KeyPair k1 = keypair_from_sk(ctx, sk1), k2 = keypair_from_sk(ctx, sk2);
  KeyPair k3 = gen(ctx, rng);
  std::printf("splitting-zero attack, q = 2^61-1, seed %llu\n",
              static_cast<unsigned long long>(seed));
  std::printf("  sk_mal1 + sk_mal2 = 0 (mod q); sk_mal1 = %llu\n",
              static_cast<unsigned long long>(sk1.value()));
  std::printf("  pk_mal1 = g1^%llu, pk_mal2 = g1^%llu (neither is the identity)\n",
              static_cast<unsigned long long>(k1.pk.exponent().value()),
              static_cast<unsigned long long>(k2.pk.exponent().value()));
  const std::string m = "signed once";
  std::vector<Signature> pairsigs{sign(ctx, m, sk1), sign(ctx, m, sk2)};
  std::printf("  agg(sign(m,sk1), sign(m,sk2)) = g0^%llu (the identity)\n",
              static_cast<unsigned long long>(agg(pairsigs).sigma_agg.exponent().value()));
  Signature s3 = sign(ctx, "honest message", k3.sk);
  std::vector<Signature> all{pairsigs[0], pairsigs[1], s3};
  AggregateSignature sa = agg(all);
  bool ok = true;
  for (const char* substitute : {"never signed", "also never signed", "anything at all"}) {
    std::vector<std::string> msgs{substitute, substitute, "honest message"};
    std::vector<GroupElement> pks{k1.pk, k2.pk, k3.pk};
    bool accepted = vfy_agg_naive(ctx, sa, msgs, pks);
    std::printf("  substitute \"%s\": %s\n", substitute, accepted ? "ACCEPT" : "REJECT");
    ok = ok && accepted;
  }
  PopKey p1{k1.pk, exp(ctx.hash_prime_to_g0(k1.pk), sk1)};
  PopKey p2{k2.pk, exp(ctx.hash_prime_to_g0(k2.pk), sk2)};
  bool pop = vfy_pop(ctx, p1) && vfy_pop(ctx, p2);
  std::printf("  proof of possession for both malicious keys: %s (does not block)\n",
              pop ? "ACCEPT" : "REJECT");
  std::vector<std::string> dup{"x", "x", "honest message"};
  std::vector<GroupElement> pks{k1.pk, k2.pk, k3.pk};
  bool distinct = vfy_agg_distinct(ctx, sa, dup, pks);
  std::printf("  distinct-message rule: %s\n", distinct ? "ACCEPT" : "REJECT");
  return (ok && pop && !distinct) ? 0 : 1;
}

int demo_zero_key(std::uint64_t seed) {
  PairingContext ctx(kLargePrime);
  (void)seed;
  KeyPair zero = keypair_from_sk(ctx, ctx.scalar(0));
  Signature s{ctx.identity(Group::G0)};
  std::printf("zero-key attack, q = 2^61-1\n");
  std::printf("  sk_adv = 0, pk_adv = g1^0 (identity), sigma = g0^0\n");
  bool off = vfy(ctx, s, "any message", zero.pk, IdentityCheck::Off);
  bool on = vfy(ctx, s, "any message", zero.pk, IdentityCheck::On);
  std::printf("  verify with identity check off: %s\n", off ? "ACCEPT" : "REJECT");
  std::printf("  verify with identity check on:  %s\n", on ? "ACCEPT" : "REJECT");
  return (off && !on) ? 0 : 1;
}

int run_symbolic_attack(const std::string& name, const std::string& format) {
  ScriptedAttack atk = scripted_attack(name);
  auto protocol = make_protocol(atk.scenario);
  Explorer explorer(*protocol, atk.model, atk.lemma, atk.scenario.bounds);
  ExploreResult r = explorer.replay(atk.schedule);
  if (format != "structured") {
    std::cout << "attack " << atk.name << " (" << atk.description << ")\n";
    std::cout << "scenario " << atk.scenario.name << ", model " << model_name(atk.model)
              << ", lemma " << atk.lemma.name << "\n";
  }
  if (name == "signing-oracle") {
    print_trace(r.verdict.trace, format);
    if (format != "structured")
      std::cout << "the adversary now holds a signature over its own term under the "
                   "verifier's key\n";
    return 0;
  }
  if (!r.verdict.falsified) {
    std::cerr << "attack did not produce a violation\n";
    return 1;
  }
  print_trace(r.verdict.trace, format);
  if (format != "structured") std::cout << "lemma " << atk.lemma.name << ": falsified\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aggregate-signature analysis toolkit"};
  app.require_subcommand(1);

  std::string format = "text";
  std::uint64_t seed = 1;
  int parallel = env_parallelism();
  std::vector<std::string> bounds_kvs;

  auto* matrix_cmd = app.add_subcommand("matrix", "reproduce a verdict table");
  std::string matrix_protocol;
  int walks = 10000;
  matrix_cmd->add_option("protocol", matrix_protocol, "toy | token-request | sana")
      ->required();
  matrix_cmd->add_option("--seed", seed, "rng seed for randomized schedules");
  matrix_cmd->add_option("--walks", walks, "randomized schedules per proven cell (sana)");
  matrix_cmd->add_option("--parallel", parallel, "worker threads across cells");
  matrix_cmd->add_option("--format", format, "text | structured");
  matrix_cmd->add_option("--bounds", bounds_kvs, "bounds override key=value")
      ->take_all();

  auto* attack_cmd = app.add_subcommand("attack", "run one attack end to end");
  std::string attack_name;
  attack_cmd->add_option("name", attack_name,
                         "rogue-key | splitting-zero | zero-key | signing-oracle | "
                         "aliveness-verifier | weak-agreement-verifier | "
                         "weak-agreement-owner | sana-forge-noinit | sana-forge-rogue")
      ->required();
  attack_cmd->add_option("--seed", seed, "rng seed");
  attack_cmd->add_option("--format", format, "text | structured");

  auto* explore_cmd = app.add_subcommand("explore", "explore one scenario file");
  std::string scenario_path, model_name_arg, lemma_name, search = "dfs";
  explore_cmd->add_option("scenario", scenario_path, "scenario-v1 json file")->required();
  explore_cmd->add_option("--model", model_name_arg, "v1|v2|v3|a4|a5|a6")->required();
  explore_cmd->add_option("--lemma", lemma_name, "lemma name")->required();
  explore_cmd->add_option("--seed", seed, "rng seed");
  explore_cmd->add_option("--format", format, "text | structured");
  explore_cmd->add_option("--search", search, "dfs | bfs");
  explore_cmd->add_option("--bounds", bounds_kvs, "bounds override key=value")->take_all();

  CLI11_PARSE(app, argc, argv);

  try {
    if (matrix_cmd->parsed()) {
      auto kind = parse_protocol_kind(matrix_protocol);
      if (!kind) {
        std::cerr << "unknown protocol: " << matrix_protocol << "\n";
        return 2;
      }
      MatrixOptions options;
      options.seed = seed;
      options.random_walks = walks;
      options.parallel = parallel;
      options.bounds_overrides = parse_bounds(bounds_kvs);
      MatrixResult result = run_matrix(*kind, options);
      std::cout << (format == "structured" ? result.render_json() : result.render_text());
      return result.all_match() ? 0 : 1;
    }
    if (attack_cmd->parsed()) {
      if (attack_name == "rogue-key") return demo_rogue_key(seed);
      if (attack_name == "splitting-zero") return demo_splitting_zero(seed);
      if (attack_name == "zero-key") return demo_zero_key(seed);
      return run_symbolic_attack(attack_name, format);
    }
    if (explore_cmd->parsed()) {
      ScenarioSpec scenario = load_scenario(scenario_path);
      apply_bounds_overrides(scenario.bounds, parse_bounds(bounds_kvs));
      auto model = parse_model(model_name_arg);
      if (!model) {
        std::cerr << "unknown model: " << model_name_arg << "\n";
        return 2;
      }
      auto lemma = find_lemma(scenario.protocol, lemma_name);
      if (!lemma) {
        std::cerr << "unknown lemma for this protocol: " << lemma_name << "\n";
        return 2;
      }
      if (search != "dfs" && search != "bfs") {
        std::cerr << "unknown search order: " << search << "\n";
        return 2;
      }
      auto protocol = make_protocol(scenario);
      Explorer explorer(*protocol, *model, *lemma, scenario.bounds,
                        search == "bfs" ? SearchOrder::BreadthFirst
                                        : SearchOrder::DepthFirst);
      ExploreResult r = explorer.run();
      if (r.verdict.falsified) {
        if (format != "structured") {
          std::cout << "falsified: counterexample with " << r.verdict.trace.size()
                    << " events (bounds " << scenario.bounds.render() << ")\n";
        }
        print_trace(r.verdict.trace, format);
        return 10;
      }
      std::cout << "bounded-safe: no violation within bounds " << scenario.bounds.render()
                << " (" << r.verdict.states_explored << " states)\n";
      return 0;
    }
  } catch (const ScenarioParseError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
