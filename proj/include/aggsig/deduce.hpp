// Dolev-Yao knowledge. The adversary learns everything on the network,
// decomposes what the public destructors allow (tuple projection,
// decryption under known keys) and composes with the public constructors
// up to a depth bound. Aggregate constructors and rogueSk are private:
// they enter knowledge only through explicit adversary rules.
#pragma once

#include <set>

#include "aggsig/term.hpp"

namespace aggsig {

class Knowledge {
 public:
  // Adds a term and saturates the analysis closure.
  void add(const Term& t);

  bool knows(const Term& t) const { return closure_.count(t) > 0; }
  const std::set<Term, TermLess>& closure() const { return closure_; }

  // Composition: can the adversary build `target` from its closure using
  // public constructors within `depth` applications?
  bool can_derive(const Term& target, int depth) const;

  std::uint64_t hash_value() const;

 private:
  void analyze(const Term& t);
  void saturate();
  std::set<Term, TermLess> closure_;
};

// One-shot form of the deduction question.
bool deduce(const std::set<Term, TermLess>& knowledge, const Term& target, int depth);

}  // namespace aggsig
