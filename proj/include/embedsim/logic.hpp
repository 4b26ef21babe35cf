#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace embedsim {

// Interpretations and atom sets are bitmasks, so signatures are limited to
// 64 atoms. Enumeration caps are far below that.
inline constexpr std::size_t kMaxSignatureSize = 64;
inline constexpr std::size_t kDefaultModelCap = 20;

// Ordered list of atom names. Order is declaration order and defines the bit
// index of each atom in Interpretation and AtomSet.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t atom) const { return names_.at(atom); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<std::size_t> find(std::string_view name) const;
  // Throws Error for unknown names.
  std::size_t index_of(std::string_view name) const;

  // Bitmask with one bit per atom.
  std::uint64_t full_mask() const;

  bool operator==(const Signature& other) const { return names_ == other.names_; }

  static bool is_valid_name(std::string_view name);

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Truth assignment: bit i set <=> i-th atom true.
struct Interpretation {
  std::uint64_t bits = 0;

  bool holds(std::size_t atom) const { return (bits >> atom) & 1U; }
  auto operator<=>(const Interpretation&) const = default;
};

// A set of atoms used as a rule antecedent.
struct AtomSet {
  std::uint64_t bits = 0;

  static AtomSet of(std::initializer_list<std::size_t> atoms);

  bool empty() const { return bits == 0; }
  bool contains(std::size_t atom) const { return (bits >> atom) & 1U; }
  std::size_t size() const;
  bool subset_of(AtomSet other) const { return (bits & ~other.bits) == 0; }
  AtomSet with(std::size_t atom) const { return AtomSet{bits | (std::uint64_t{1} << atom)}; }
  std::vector<std::size_t> atoms() const;

  // omega satisfies the conjunction of the atoms in this set.
  bool satisfied_by(Interpretation omega) const { return (omega.bits & bits) == bits; }

  auto operator<=>(const AtomSet&) const = default;
};

class Formula {
 public:
  enum class Kind { kTop, kBottom, kAtom, kNot, kAnd, kOr, kImplies, kIff };

  static Formula top();
  static Formula bottom();
  static Formula atom(std::size_t index);
  static Formula negation(Formula operand);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula equivalence(Formula lhs, Formula rhs);

  // a1 & ... & an -> head; an empty body gives TRUE -> head.
  static Formula rule(AtomSet body, std::size_t head);

  Kind kind() const;
  std::size_t atom_index() const;
  const Formula& operand() const;
  const Formula& lhs() const;
  const Formula& rhs() const;

  bool evaluate(Interpretation omega) const;

  // Largest atom index referenced plus one (0 for constant formulas).
  std::size_t atom_bound() const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Classical truth value of f under omega.
inline bool evaluate(const Formula& f, Interpretation omega) { return f.evaluate(omega); }

// Canonical text using the KB grammar, with minimal parentheses.
std::string to_string(const Formula& f, const Signature& signature);

struct KnowledgeBase {
  Signature signature;
  std::vector<Formula> formulas;
};

// (alpha_1, ..., alpha_k), alpha_1 first.
struct StratifiedKB {
  Signature signature;
  std::vector<Formula> strata;
};

using ParsedKB = std::variant<KnowledgeBase, StratifiedKB>;

// Line-oriented KB text: an `atoms:` header, then `rule:`/`formula:` lines or
// `stratum:` lines (not both). Throws ParseError with line/column.
ParsedKB parse_kb(std::string_view text);
Formula parse_formula(std::string_view text, const Signature& signature);

// Canonical serialization; parse_kb(canonical_text(x)) reproduces x.
std::string canonical_text(const KnowledgeBase& kb);
std::string canonical_text(const StratifiedKB& kb);

// All interpretations satisfying every formula, ascending bitmask order.
// Throws CapExceeded when the signature has more than `cap` atoms.
std::vector<Interpretation> enumerate_models(const KnowledgeBase& kb,
                                             std::size_t cap = kDefaultModelCap);

// K |= (/\ S) -> b. S may be empty (TRUE antecedent).
bool entails(const KnowledgeBase& kb, AtomSet antecedent, std::size_t head);

// Longest satisfied prefix of the strata; 0 when alpha_1 fails.
std::size_t rank_mu(const StratifiedKB& theta, Interpretation omega);

// Theta |= S |~ b by the prefix definition: some i in {0..k} with
// alpha_1..alpha_i & S |= b and alpha_1..alpha_i & S consistent with b.
bool nm_consequence_def(const StratifiedKB& theta, AtomSet antecedent, std::size_t head);

// Theta |= S |~ b via the rank criterion m+ > m-, where m+/m- are the maximal
// ranks of interpretations satisfying S & b / S & !b (m- = -1 if none).
bool nm_consequence_rank(const StratifiedKB& theta, AtomSet antecedent, std::size_t head);

// Theta_1 = (/\ K); its default consequences coincide with K's entailments
// whenever K is consistent.
StratifiedKB single_stratum(const KnowledgeBase& kb);

enum class RelationKind { kMonotonic, kNonMonotonic };
std::string to_string(RelationKind kind);

// A consequence relation over a signature, answered for all heads at once:
// bit b of consequences(S) is set iff S entails b under the relation.
// Backed by precomputed models/ranks; cheap to copy and thread-safe.
class ConsequenceRelation {
 public:
  static ConsequenceRelation monotonic(const KnowledgeBase& kb,
                                       std::size_t cap = kDefaultModelCap);
  static ConsequenceRelation ranked(const StratifiedKB& theta,
                                    std::size_t cap = kDefaultModelCap);

  const Signature& signature() const { return signature_; }
  RelationKind kind() const { return kind_; }

  std::uint64_t consequences(AtomSet antecedent) const { return query_(antecedent); }
  bool holds(AtomSet antecedent, std::size_t head) const {
    return (consequences(antecedent) >> head) & 1U;
  }

 private:
  ConsequenceRelation(Signature signature, RelationKind kind,
                      std::function<std::uint64_t(AtomSet)> query)
      : signature_(std::move(signature)), kind_(kind), query_(std::move(query)) {}

  Signature signature_;
  RelationKind kind_;
  std::function<std::uint64_t(AtomSet)> query_;
};

// A rule query S -> b.
struct Query {
  AtomSet antecedent;
  std::size_t head = 0;

  auto operator<=>(const Query&) const = default;
};

// Every nonempty S with |S| <= cap and every head b, in canonical order:
// lexicographic in (|S|, S bitmask, b).
std::vector<Query> all_queries(std::size_t atoms, std::size_t subset_cap);

// Canonical ordering used for all query lists and mismatch reports.
bool canonical_less(const Query& lhs, const Query& rhs);

}  // namespace embedsim
