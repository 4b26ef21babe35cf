#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "embedsim/rational.hpp"

namespace embedsim {

enum class Relation { kGreaterEqual, kLessEqual };

struct Constraint {
  std::map<std::size_t, Rational> terms;  // variable index -> coefficient
  Relation relation = Relation::kGreaterEqual;
  Rational rhs = 0;
  std::string label;
};

// Finite system of non-strict linear inequalities over free rational
// variables. Strict inequalities must be expressed with an explicit margin
// before they get here.
class LinearSystem {
 public:
  std::size_t add_variable(std::string name);
  // Throws ContractViolation if a term references an undeclared variable.
  void add_constraint(Constraint constraint);

  std::size_t variable_count() const { return variables_.size(); }
  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

 private:
  std::vector<std::string> variables_;
  std::vector<Constraint> constraints_;
};

struct Witness {
  std::vector<Rational> values;  // one per variable
};

// Non-negative multipliers y, one per constraint. Writing every constraint
// as g_j . x >= h_j (<= rows negated), sum_j y_j g_j = 0 while
// sum_j y_j h_j = bound > 0, i.e. the system implies 0 >= bound.
struct FarkasCertificate {
  std::vector<Rational> multipliers;
  Rational bound;
};

struct FeasibilityOutcome {
  std::variant<Witness, FarkasCertificate> result;

  bool feasible() const { return std::holds_alternative<Witness>(result); }
  const Witness& witness() const { return std::get<Witness>(result); }
  const FarkasCertificate& farkas() const { return std::get<FarkasCertificate>(result); }
};

// Exact phase-one simplex with Bland's rule. Returns a witness, or a Farkas
// certificate scaled to a primitive integer vector. Both are re-checked with
// satisfies()/verify_farkas() before being returned.
FeasibilityOutcome lp_feasible(const LinearSystem& system);

bool satisfies(const LinearSystem& system, const Witness& witness);
bool verify_farkas(const LinearSystem& system, const FarkasCertificate& certificate);

// sum_j y_j (g_j . x >= h_j): combined coefficients (zero entries dropped)
// and right-hand side, in >= form.
struct LinearCombination {
  std::map<std::size_t, Rational> terms;
  Rational rhs;
};
LinearCombination combine(const LinearSystem& system, const std::vector<Rational>& multipliers);

std::string format_combination(const LinearSystem& system, const LinearCombination& combination);
std::string format_constraint(const LinearSystem& system, const Constraint& constraint);

}  // namespace embedsim
