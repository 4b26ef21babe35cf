#include "embedsim/logic.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

#include "embedsim/errors.hpp"

namespace embedsim {

// ---------------------------------------------------------------------------
// Signature

Signature::Signature(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxSignatureSize) {
    throw CapExceeded("signature has " + std::to_string(names_.size()) +
                      " atoms; at most " + std::to_string(kMaxSignatureSize) +
                      " are supported");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!is_valid_name(names_[i])) {
      throw Error("invalid atom name '" + names_[i] + "'");
    }
    if (!index_.emplace(names_[i], i).second) {
      throw Error("duplicate atom '" + names_[i] + "'");
    }
  }
}

std::optional<std::size_t> Signature::find(std::string_view name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Signature::index_of(std::string_view name) const {
  if (auto index = find(name)) return *index;
  throw Error("unknown atom '" + std::string(name) + "'");
}

std::uint64_t Signature::full_mask() const {
  return names_.size() >= 64 ? ~std::uint64_t{0}
                             : (std::uint64_t{1} << names_.size()) - 1;
}

bool Signature::is_valid_name(std::string_view name) {
  if (name.empty() || name == "TRUE" || name == "FALSE") return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':';
  });
}

// ---------------------------------------------------------------------------
// AtomSet

AtomSet AtomSet::of(std::initializer_list<std::size_t> atoms) {
  AtomSet set;
  for (std::size_t a : atoms) set = set.with(a);
  return set;
}

std::size_t AtomSet::size() const { return static_cast<std::size_t>(std::popcount(bits)); }

std::vector<std::size_t> AtomSet::atoms() const {
  std::vector<std::size_t> out;
  for (std::uint64_t rest = bits; rest != 0; rest &= rest - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(rest)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  Kind kind;
  std::size_t atom = 0;
  std::optional<Formula> lhs = std::nullopt;
  std::optional<Formula> rhs = std::nullopt;
};

Formula Formula::top() { return Formula(std::make_shared<const Node>(Node{Kind::kTop})); }
Formula Formula::bottom() { return Formula(std::make_shared<const Node>(Node{Kind::kBottom})); }

Formula Formula::atom(std::size_t index) {
  if (index >= kMaxSignatureSize) throw Error("atom index out of range");
  return Formula(std::make_shared<const Node>(Node{Kind::kAtom, index}));
}

Formula Formula::negation(Formula operand) {
  return Formula(std::make_shared<const Node>(Node{Kind::kNot, 0, std::move(operand)}));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Kind::kAnd, 0, std::move(lhs), std::move(rhs)}));
}
Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Kind::kOr, 0, std::move(lhs), std::move(rhs)}));
}
Formula Formula::implication(Formula lhs, Formula rhs) {
  return Formula(
      std::make_shared<const Node>(Node{Kind::kImplies, 0, std::move(lhs), std::move(rhs)}));
}
Formula Formula::equivalence(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Kind::kIff, 0, std::move(lhs), std::move(rhs)}));
}

Formula Formula::rule(AtomSet body, std::size_t head) {
  std::optional<Formula> antecedent;
  for (std::size_t a : body.atoms()) {
    antecedent = antecedent ? conjunction(*antecedent, atom(a)) : atom(a);
  }
  return implication(antecedent ? *antecedent : top(), atom(head));
}

Formula::Kind Formula::kind() const { return node_->kind; }
std::size_t Formula::atom_index() const { return node_->atom; }
const Formula& Formula::operand() const { return *node_->lhs; }
const Formula& Formula::lhs() const { return *node_->lhs; }
const Formula& Formula::rhs() const { return *node_->rhs; }

bool Formula::evaluate(Interpretation omega) const {
  switch (node_->kind) {
    case Kind::kTop: return true;
    case Kind::kBottom: return false;
    case Kind::kAtom: return omega.holds(node_->atom);
    case Kind::kNot: return !node_->lhs->evaluate(omega);
    case Kind::kAnd: return node_->lhs->evaluate(omega) && node_->rhs->evaluate(omega);
    case Kind::kOr: return node_->lhs->evaluate(omega) || node_->rhs->evaluate(omega);
    case Kind::kImplies: return !node_->lhs->evaluate(omega) || node_->rhs->evaluate(omega);
    case Kind::kIff: return node_->lhs->evaluate(omega) == node_->rhs->evaluate(omega);
  }
  return false;
}

std::size_t Formula::atom_bound() const {
  switch (node_->kind) {
    case Kind::kTop:
    case Kind::kBottom: return 0;
    case Kind::kAtom: return node_->atom + 1;
    case Kind::kNot: return node_->lhs->atom_bound();
    default: return std::max(node_->lhs->atom_bound(), node_->rhs->atom_bound());
  }
}

namespace {

// Binding strength; higher binds tighter.
int precedence(Formula::Kind kind) {
  switch (kind) {
    case Formula::Kind::kIff: return 1;
    case Formula::Kind::kImplies: return 2;
    case Formula::Kind::kOr: return 3;
    case Formula::Kind::kAnd: return 4;
    case Formula::Kind::kNot: return 5;
    default: return 6;
  }
}

const char* symbol(Formula::Kind kind) {
  switch (kind) {
    case Formula::Kind::kIff: return " <-> ";
    case Formula::Kind::kImplies: return " -> ";
    case Formula::Kind::kOr: return " | ";
    case Formula::Kind::kAnd: return " & ";
    default: return "";
  }
}

void write(const Formula& f, const Signature& sig, std::string& out) {
  const auto kind = f.kind();
  switch (kind) {
    case Formula::Kind::kTop: out += "TRUE"; return;
    case Formula::Kind::kBottom: out += "FALSE"; return;
    case Formula::Kind::kAtom: out += sig.name(f.atom_index()); return;
    case Formula::Kind::kNot: {
      out += '!';
      const bool paren = precedence(f.operand().kind()) < precedence(kind);
      if (paren) out += '(';
      write(f.operand(), sig, out);
      if (paren) out += ')';
      return;
    }
    default: break;
  }
  const int p = precedence(kind);
  const bool right_assoc = kind == Formula::Kind::kImplies;
  const int lp = precedence(f.lhs().kind());
  const int rp = precedence(f.rhs().kind());
  const bool lparen = right_assoc ? lp <= p : lp < p;
  const bool rparen = right_assoc ? rp < p : rp <= p;
  if (lparen) out += '(';
  write(f.lhs(), sig, out);
  if (lparen) out += ')';
  out += symbol(kind);
  if (rparen) out += '(';
  write(f.rhs(), sig, out);
  if (rparen) out += ')';
}

}  // namespace

std::string to_string(const Formula& f, const Signature& signature) {
  std::string out;
  write(f, signature, out);
  return out;
}

std::string canonical_text(const KnowledgeBase& kb) {
  std::string out = "atoms:";
  for (const auto& name : kb.signature.names()) out += " " + name;
  out += '\n';
  for (const auto& f : kb.formulas) out += "formula: " + to_string(f, kb.signature) + "\n";
  return out;
}

std::string canonical_text(const StratifiedKB& kb) {
  std::string out = "atoms:";
  for (const auto& name : kb.signature.names()) out += " " + name;
  out += '\n';
  for (const auto& f : kb.strata) out += "stratum: " + to_string(f, kb.signature) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Semantics

namespace {

void check_cap(const Signature& sig, std::size_t cap) {
  if (sig.size() > cap) {
    throw CapExceeded("signature has " + std::to_string(sig.size()) +
                      " atoms; enumeration cap is " + std::to_string(cap));
  }
}

std::uint64_t interpretation_count(const Signature& sig) {
  return std::uint64_t{1} << sig.size();
}

bool satisfies_all(const std::vector<Formula>& formulas, Interpretation omega) {
  return std::all_of(formulas.begin(), formulas.end(),
                     [&](const Formula& f) { return f.evaluate(omega); });
}

// Calls fn for every interpretation over `full` that includes `fixed`.
template <typename Fn>
void for_each_superset(std::uint64_t fixed, std::uint64_t full, Fn&& fn) {
  const std::uint64_t free = full & ~fixed;
  std::uint64_t rest = free;
  while (true) {
    fn(Interpretation{fixed | rest});
    if (rest == 0) break;
    rest = (rest - 1) & free;
  }
}

}  // namespace

std::vector<Interpretation> enumerate_models(const KnowledgeBase& kb, std::size_t cap) {
  check_cap(kb.signature, cap);
  std::vector<Interpretation> models;
  const std::uint64_t count = interpretation_count(kb.signature);
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    if (satisfies_all(kb.formulas, Interpretation{bits})) models.push_back(Interpretation{bits});
  }
  return models;
}

bool entails(const KnowledgeBase& kb, AtomSet antecedent, std::size_t head) {
  for (Interpretation omega : enumerate_models(kb)) {
    if (antecedent.satisfied_by(omega) && !omega.holds(head)) return false;
  }
  return true;
}

std::size_t rank_mu(const StratifiedKB& theta, Interpretation omega) {
  std::size_t rank = 0;
  while (rank < theta.strata.size() && theta.strata[rank].evaluate(omega)) ++rank;
  return rank;
}

bool nm_consequence_def(const StratifiedKB& theta, AtomSet antecedent, std::size_t head) {
  check_cap(theta.signature, kDefaultModelCap);
  const std::uint64_t count = interpretation_count(theta.signature);
  for (std::size_t i = 0; i <= theta.strata.size(); ++i) {
    const std::vector<Formula> prefix(theta.strata.begin(),
                                      theta.strata.begin() + static_cast<std::ptrdiff_t>(i));
    bool consistent_with_head = false;
    bool entails_head = true;
    for (std::uint64_t bits = 0; bits < count && entails_head; ++bits) {
      const Interpretation omega{bits};
      if (!antecedent.satisfied_by(omega) || !satisfies_all(prefix, omega)) continue;
      if (omega.holds(head)) {
        consistent_with_head = true;
      } else {
        entails_head = false;
      }
    }
    if (entails_head && consistent_with_head) return true;
  }
  return false;
}

bool nm_consequence_rank(const StratifiedKB& theta, AtomSet antecedent, std::size_t head) {
  check_cap(theta.signature, kDefaultModelCap);
  long m_plus = -1;
  long m_minus = -1;
  for_each_superset(antecedent.bits, theta.signature.full_mask(), [&](Interpretation omega) {
    const long mu = static_cast<long>(rank_mu(theta, omega));
    long& target = omega.holds(head) ? m_plus : m_minus;
    target = std::max(target, mu);
  });
  return m_plus > m_minus;
}

StratifiedKB single_stratum(const KnowledgeBase& kb) {
  std::optional<Formula> all;
  for (const auto& f : kb.formulas) all = all ? Formula::conjunction(*all, f) : f;
  return StratifiedKB{kb.signature, {all ? *all : Formula::top()}};
}

std::string to_string(RelationKind kind) {
  return kind == RelationKind::kMonotonic ? "monotonic" : "nonmonotonic";
}

// ---------------------------------------------------------------------------
// ConsequenceRelation

ConsequenceRelation ConsequenceRelation::monotonic(const KnowledgeBase& kb, std::size_t cap) {
  auto models = std::make_shared<const std::vector<Interpretation>>(enumerate_models(kb, cap));
  const std::uint64_t full = kb.signature.full_mask();
  return ConsequenceRelation(kb.signature, RelationKind::kMonotonic,
                             [models, full](AtomSet s) {
                               std::uint64_t common = full;
                               for (Interpretation omega : *models) {
                                 if (s.satisfied_by(omega)) common &= omega.bits;
                               }
                               return common;
                             });
}

ConsequenceRelation ConsequenceRelation::ranked(const StratifiedKB& theta, std::size_t cap) {
  check_cap(theta.signature, cap);
  const std::uint64_t count = interpretation_count(theta.signature);
  auto ranks = std::make_shared<std::vector<long>>(count);
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    (*ranks)[bits] = static_cast<long>(rank_mu(theta, Interpretation{bits}));
  }
  const std::uint64_t full = theta.signature.full_mask();
  const std::size_t n = theta.signature.size();
  return ConsequenceRelation(
      theta.signature, RelationKind::kNonMonotonic,
      [ranks = std::shared_ptr<const std::vector<long>>(ranks), full, n](AtomSet s) {
        std::vector<long> m_plus(n, -1);
        std::vector<long> m_minus(n, -1);
        for_each_superset(s.bits, full, [&](Interpretation omega) {
          const long mu = (*ranks)[omega.bits];
          for (std::size_t b = 0; b < n; ++b) {
            long& target = omega.holds(b) ? m_plus[b] : m_minus[b];
            target = std::max(target, mu);
          }
        });
        std::uint64_t out = 0;
        for (std::size_t b = 0; b < n; ++b) {
          if (m_plus[b] > m_minus[b]) out |= std::uint64_t{1} << b;
        }
        return out;
      });
}

// ---------------------------------------------------------------------------
// Queries

bool canonical_less(const Query& lhs, const Query& rhs) {
  const auto ls = lhs.antecedent.size();
  const auto rs = rhs.antecedent.size();
  if (ls != rs) return ls < rs;
  if (lhs.antecedent.bits != rhs.antecedent.bits) return lhs.antecedent.bits < rhs.antecedent.bits;
  return lhs.head < rhs.head;
}

std::vector<Query> all_queries(std::size_t atoms, std::size_t subset_cap) {
  if (atoms > 24) throw CapExceeded("query enumeration over more than 24 atoms");
  std::vector<Query> out;
  const std::uint64_t count = std::uint64_t{1} << atoms;
  for (std::size_t size = 1; size <= std::min(subset_cap, atoms); ++size) {
    for (std::uint64_t bits = 1; bits < count; ++bits) {
      if (static_cast<std::size_t>(std::popcount(bits)) != size) continue;
      for (std::size_t b = 0; b < atoms; ++b) out.push_back(Query{AtomSet{bits}, b});
    }
  }
  return out;
}

}  // namespace embedsim
