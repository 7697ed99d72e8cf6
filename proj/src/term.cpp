#include "aggsig/term.hpp"

#include <algorithm>
#include <stdexcept>

namespace aggsig {

struct Term::Node {
  TermKind kind;
  std::string label;
  std::vector<Term> args;
  std::uint64_t hash;
};

namespace {

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t hash_string(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

Term Term::make(TermKind kind, std::string label, std::vector<Term> args) {
  for (const Term& a : args) {
    if (a.null()) throw std::invalid_argument("null term argument");
  }
  std::uint64_t h = hash_combine(static_cast<std::uint64_t>(kind) * 0x2545f4914f6cdd1dull,
                                 hash_string(label));
  for (const Term& a : args) h = hash_combine(h, a.hash_value());
  auto node = std::make_shared<Node>(Node{kind, std::move(label), std::move(args), h});
  return Term(std::move(node));
}

Term Term::public_name(std::string label) { return make(TermKind::PublicName, std::move(label), {}); }
Term Term::nonce(std::string label) { return make(TermKind::Nonce, std::move(label), {}); }
Term Term::tuple(std::vector<Term> args) { return make(TermKind::Tuple, "", std::move(args)); }
Term Term::hash(Term t) { return make(TermKind::Hash, "", {std::move(t)}); }
Term Term::sign(Term msg, Term sk) { return make(TermKind::Sign, "", {std::move(msg), std::move(sk)}); }
Term Term::pk(Term sk) { return make(TermKind::Pk, "", {std::move(sk)}); }
Term Term::enc(Term msg, Term key) { return make(TermKind::Enc, "", {std::move(msg), std::move(key)}); }
Term Term::rogue_pk(Term target) { return make(TermKind::RoguePk, "", {std::move(target)}); }
Term Term::rogue_sk(Term target) { return make(TermKind::RogueSk, "", {std::move(target)}); }

namespace {

std::vector<Term> sorted_pair_args(std::vector<std::pair<Term, Term>> pairs) {
  std::vector<Term> args;
  args.reserve(pairs.size());
  for (auto& [a, b] : pairs) args.push_back(Term::tuple({a, b}));
  std::sort(args.begin(), args.end(), TermLess{});
  return args;
}

}  // namespace

Term Term::indexed_agg(std::vector<std::pair<Term, Term>> entries) {
  if (entries.empty()) throw std::invalid_argument("empty aggregate");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      if (entries[i].second == entries[j].second)
        throw std::invalid_argument("aggregate indices must be pairwise distinct");
    }
  }
  return make(TermKind::IndexedAgg, "", sorted_pair_args(std::move(entries)));
}

Term Term::valid_agg(std::vector<std::pair<Term, Term>> pairs) {
  if (pairs.empty()) throw std::invalid_argument("empty aggregate");
  return make(TermKind::ValidAgg, "", sorted_pair_args(std::move(pairs)));
}

Term Term::rogue_agg(std::vector<std::pair<Term, Term>> pairs) {
  if (pairs.empty()) throw std::invalid_argument("empty aggregate");
  return make(TermKind::RogueAgg, "", sorted_pair_args(std::move(pairs)));
}

Term Term::zero_agg(Term valid, std::vector<Term> zero_pks) {
  if (valid.kind() != TermKind::ValidAgg)
    throw std::invalid_argument("zero_agg expects a validAgg core");
  if (zero_pks.empty()) throw std::invalid_argument("zero_agg needs zero keys");
  std::sort(zero_pks.begin(), zero_pks.end(), TermLess{});
  std::vector<Term> args{std::move(valid)};
  for (Term& t : zero_pks) args.push_back(std::move(t));
  return make(TermKind::ZeroAgg, "", std::move(args));
}

TermKind Term::kind() const {
  if (!node_) throw std::logic_error("null term");
  return node_->kind;
}

const std::string& Term::label() const {
  static const std::string empty;
  return node_ ? node_->label : empty;
}

std::span<const Term> Term::args() const {
  if (!node_) return {};
  return node_->args;
}

const Term& Term::arg(std::size_t i) const {
  if (!node_ || i >= node_->args.size()) throw std::out_of_range("term arg");
  return node_->args[i];
}

std::uint64_t Term::hash_value() const { return node_ ? node_->hash : 0; }

bool Term::operator==(const Term& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  if (node_->hash != o.node_->hash) return false;
  return term_compare(*this, o) == 0;
}

bool Term::operator<(const Term& o) const { return term_compare(*this, o) < 0; }

int term_compare(const Term& a, const Term& b) {
  if (a.null() || b.null()) {
    if (a.null() && b.null()) return 0;
    return a.null() ? -1 : 1;
  }
  if (a.kind() != b.kind())
    return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  if (int c = a.label().compare(b.label()); c != 0) return c < 0 ? -1 : 1;
  auto aa = a.args(), ba = b.args();
  if (aa.size() != ba.size()) return aa.size() < ba.size() ? -1 : 1;
  for (std::size_t i = 0; i < aa.size(); ++i) {
    if (int c = term_compare(aa[i], ba[i]); c != 0) return c;
  }
  return 0;
}

namespace {

void render_list(std::string& out, std::span<const Term> args, char open, char close) {
  out.push_back(open);
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out.push_back(',');
    out += args[i].render();
  }
  out.push_back(close);
}

}  // namespace

std::string Term::render() const {
  if (!node_) return "_";
  std::string out;
  switch (node_->kind) {
    case TermKind::PublicName: return node_->label;
    case TermKind::Nonce: return "~" + node_->label;
    case TermKind::Tuple:
      render_list(out, args(), '<', '>');
      return out;
    case TermKind::Hash: return "h(" + arg(0).render() + ")";
    case TermKind::Sign: return "sign(" + arg(0).render() + "," + arg(1).render() + ")";
    case TermKind::Pk: return "pk(" + arg(0).render() + ")";
    case TermKind::Enc: return "enc(" + arg(0).render() + "," + arg(1).render() + ")";
    case TermKind::IndexedAgg:
      out = "agg";
      render_list(out, args(), '{', '}');
      return out;
    case TermKind::RoguePk: return "roguePk(" + arg(0).render() + ")";
    case TermKind::RogueSk: return "rogueSk(" + arg(0).render() + ")";
    case TermKind::ValidAgg:
      out = "validAgg";
      render_list(out, args(), '{', '}');
      return out;
    case TermKind::RogueAgg:
      out = "rogueAgg";
      render_list(out, args(), '{', '}');
      return out;
    case TermKind::ZeroAgg:
      out = "zeroAgg";
      render_list(out, args(), '{', '}');
      return out;
  }
  return out;
}

}  // namespace aggsig
