#include "aggsig/deduce.hpp"

namespace aggsig {

namespace {

bool derive_from(const std::set<Term, TermLess>& closure, const Term& target, int depth) {
  if (closure.count(target)) return true;
  switch (target.kind()) {
    case TermKind::PublicName:
      return true;  // public constants are universally known
    default:
      break;
  }
  if (depth <= 0) return false;
  switch (target.kind()) {
    case TermKind::Tuple: {
      for (const Term& a : target.args()) {
        if (!derive_from(closure, a, depth - 1)) return false;
      }
      return true;
    }
    case TermKind::Hash:
      return derive_from(closure, target.arg(0), depth - 1);
    case TermKind::Sign:  // signing requires the secret key
      return derive_from(closure, target.arg(0), depth - 1) &&
             derive_from(closure, target.arg(1), depth - 1);
    case TermKind::Enc:
      return derive_from(closure, target.arg(0), depth - 1) &&
             derive_from(closure, target.arg(1), depth - 1);
    case TermKind::Pk:
      return derive_from(closure, target.arg(0), depth - 1);
    // Private constructors: never adversary-applicable. Terms of these
    // kinds are derivable only when produced by a rule and thus already in
    // the closure (handled above).
    case TermKind::IndexedAgg:
    case TermKind::ValidAgg:
    case TermKind::RogueAgg:
    case TermKind::ZeroAgg:
    case TermKind::RoguePk:
    case TermKind::RogueSk:
    case TermKind::Nonce:
      return false;
    default:
      return false;
  }
}

}  // namespace

void Knowledge::add(const Term& t) {
  if (t.null()) return;
  if (!closure_.insert(t).second) return;
  analyze(t);
  saturate();
}

void Knowledge::analyze(const Term& t) {
  if (t.kind() == TermKind::Tuple) {
    for (const Term& a : t.args()) {
      if (closure_.insert(a).second) analyze(a);
    }
  }
}

void Knowledge::saturate() {
  // Decrypt anything whose secret key is now derivable. A decryption can
  // expose new tuples and keys, so iterate to a fixpoint.
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Term> learned;
    for (const Term& t : closure_) {
      if (t.kind() != TermKind::Enc) continue;
      const Term& key = t.arg(1);
      if (key.kind() != TermKind::Pk) continue;
      if (!derive_from(closure_, key.arg(0), 2)) continue;
      if (!closure_.count(t.arg(0))) learned.push_back(t.arg(0));
    }
    for (const Term& t : learned) {
      if (closure_.insert(t).second) {
        analyze(t);
        changed = true;
      }
    }
  }
}

bool Knowledge::can_derive(const Term& target, int depth) const {
  return derive_from(closure_, target, depth);
}

std::uint64_t Knowledge::hash_value() const {
  std::uint64_t h = 0x9ae16a3b2f90404full;
  for (const Term& t : closure_) {
    h ^= t.hash_value() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

bool deduce(const std::set<Term, TermLess>& knowledge, const Term& target, int depth) {
  Knowledge k;
  for (const Term& t : knowledge) k.add(t);
  return k.can_derive(target, depth);
}

}  // namespace aggsig
