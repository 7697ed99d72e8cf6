// Symbolic message algebra. Terms are immutable shared trees with a total
// order; multiset-shaped constructors (aggregates) keep their entries in
// canonical sorted form so structural equality coincides with multiset
// equality, matching both the AC semantics of the verification theory and
// the order independence of the underlying group products.
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace aggsig {

enum class TermKind : std::uint8_t {
  PublicName,  // public constant: identities, indices, protocol tags
  Nonce,       // fresh value: nonces, secret keys
  Tuple,       // n-ary, arity-tagged
  Hash,        // h(t)
  Sign,        // sign(m, sk)
  Pk,          // pk(sk)
  Enc,         // enc(m, pk)
  IndexedAgg,  // agg of <signature, index> entries (validation models)
  RoguePk,     // roguePk(target pk)           (attack-finding rogue model)
  RogueSk,     // rogueSk(target pk)           (validation rogue model)
  ValidAgg,    // validAgg of <msg, pk> pairs   (attack-finding models)
  RogueAgg,    // rogueAgg of <msg, pk> pairs
  ZeroAgg,     // zeroAgg(validAgg, zero pk list)
};

class Term {
 public:
  Term() = default;  // null handle

  static Term public_name(std::string label);
  static Term nonce(std::string label);
  static Term tuple(std::vector<Term> args);
  static Term hash(Term t);
  static Term sign(Term msg, Term sk);
  static Term pk(Term sk);
  static Term enc(Term msg, Term key);
  // entries are <signature, index> pairs, stored sorted
  static Term indexed_agg(std::vector<std::pair<Term, Term>> entries);
  static Term rogue_pk(Term target);
  static Term rogue_sk(Term target);
  // pairs are <message, pk>, stored sorted
  static Term valid_agg(std::vector<std::pair<Term, Term>> pairs);
  static Term rogue_agg(std::vector<std::pair<Term, Term>> pairs);
  static Term zero_agg(Term valid, std::vector<Term> zero_pks);

  bool null() const { return node_ == nullptr; }
  TermKind kind() const;
  const std::string& label() const;
  std::span<const Term> args() const;
  std::size_t arity() const { return args().size(); }
  std::uint64_t hash_value() const;

  // convenience accessors for binary/unary kinds
  const Term& arg(std::size_t i) const;

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }
  bool operator<(const Term& o) const;  // canonical total order

  // Canonical rendering, stable across runs; used in trace output.
  std::string render() const;

  bool is_agg_shaped() const {
    TermKind k = kind();
    return k == TermKind::IndexedAgg || k == TermKind::ValidAgg ||
           k == TermKind::RogueAgg || k == TermKind::ZeroAgg;
  }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Term make(TermKind kind, std::string label, std::vector<Term> args);
  std::shared_ptr<const Node> node_;
};

int term_compare(const Term& a, const Term& b);

struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return a < b; }
};

}  // namespace aggsig
