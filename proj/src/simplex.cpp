#include <optional>

#include "embedsim/errors.hpp"
#include "embedsim/lp.hpp"

namespace embedsim {

std::size_t LinearSystem::add_variable(std::string name) {
  variables_.push_back(std::move(name));
  return variables_.size() - 1;
}

void LinearSystem::add_constraint(Constraint constraint) {
  for (auto it = constraint.terms.begin(); it != constraint.terms.end();) {
    if (it->first >= variables_.size()) {
      throw ContractViolation("constraint '" + constraint.label +
                              "' references an undeclared variable");
    }
    it = it->second == 0 ? constraint.terms.erase(it) : std::next(it);
  }
  constraints_.push_back(std::move(constraint));
}

namespace {

using Row = std::vector<Rational>;

// Finds y >= 0 with A y = b by minimising the sum of artificial variables.
// Columns that already form a unit vector in a row with b >= 0 seed the basis,
// so rows such as "-g.x + s = 0" need no artificial variable.
std::optional<std::vector<Rational>> phase_one(std::vector<Row> a, std::vector<Rational> b,
                                               std::size_t columns) {
  const std::size_t rows = a.size();
  for (std::size_t r = 0; r < rows; ++r) {
    if (b[r] < 0) {
      for (auto& x : a[r]) x = -x;
      b[r] = -b[r];
    }
  }

  std::vector<std::size_t> nonzeros_in_column(columns, 0);
  for (const auto& row : a) {
    for (std::size_t j = 0; j < columns; ++j) {
      if (row[j] != 0) ++nonzeros_in_column[j];
    }
  }

  std::vector<std::size_t> basis(rows);
  std::vector<bool> column_used(columns, false);
  std::vector<std::size_t> artificial_rows;
  for (std::size_t r = 0; r < rows; ++r) {
    std::optional<std::size_t> unit;
    for (std::size_t j = 0; j < columns && !unit; ++j) {
      if (!column_used[j] && nonzeros_in_column[j] == 1 && a[r][j] == 1) unit = j;
    }
    if (unit) {
      basis[r] = *unit;
      column_used[*unit] = true;
    } else {
      artificial_rows.push_back(r);
    }
  }

  const std::size_t total = columns + artificial_rows.size();
  const std::size_t rhs = total;
  std::vector<Row> t(rows, Row(total + 1, Rational(0)));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < columns; ++j) t[r][j] = a[r][j];
    t[r][rhs] = b[r];
  }
  for (std::size_t k = 0; k < artificial_rows.size(); ++k) {
    const std::size_t r = artificial_rows[k];
    t[r][columns + k] = 1;
    basis[r] = columns + k;
  }

  // Reduced costs of the phase-one objective (sum of artificials); the rhs
  // entry holds minus the current objective value.
  Row cost(total + 1, Rational(0));
  for (std::size_t r : artificial_rows) {
    for (std::size_t j = 0; j < columns; ++j) cost[j] -= t[r][j];
    cost[rhs] -= t[r][rhs];
  }

  while (true) {
    // Bland: lowest-index improving column enters.
    std::optional<std::size_t> entering;
    for (std::size_t j = 0; j < total; ++j) {
      if (cost[j] < 0) {
        entering = j;
        break;
      }
    }
    if (!entering) break;
    const std::size_t q = *entering;

    // Ratio test; ties broken by lowest basic variable index.
    std::optional<std::size_t> leaving;
    Rational best_ratio;
    for (std::size_t r = 0; r < rows; ++r) {
      if (t[r][q] <= 0) continue;
      Rational ratio = t[r][rhs] / t[r][q];
      if (!leaving || ratio < best_ratio || (ratio == best_ratio && basis[r] < basis[*leaving])) {
        leaving = r;
        best_ratio = std::move(ratio);
      }
    }
    // Phase one is bounded below by zero, so some row always limits the step.
    if (!leaving) throw Error("simplex: unbounded phase-one direction");
    const std::size_t p = *leaving;

    const Rational pivot = t[p][q];
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j <= total; ++j) {
      if (t[p][j] != 0) {
        t[p][j] /= pivot;
        support.push_back(j);
      }
    }
    auto eliminate = [&](Row& row) {
      if (row[q] == 0) return;
      const Rational factor = row[q];
      for (std::size_t j : support) row[j] -= factor * t[p][j];
    };
    for (std::size_t r = 0; r < rows; ++r) {
      if (r != p) eliminate(t[r]);
    }
    eliminate(cost);
    basis[p] = q;
  }

  if (cost[rhs] != 0) return std::nullopt;
  std::vector<Rational> y(columns, Rational(0));
  for (std::size_t r = 0; r < rows; ++r) {
    if (basis[r] < columns) y[basis[r]] = t[r][rhs];
  }
  return y;
}

// Coefficients and rhs of constraint j rewritten as g . x >= h.
void ge_form(const Constraint& c, std::size_t n, Row& g, Rational& h) {
  g.assign(n, Rational(0));
  const bool flip = c.relation == Relation::kLessEqual;
  for (const auto& [var, coef] : c.terms) g[var] = flip ? Rational(-coef) : coef;
  h = flip ? Rational(-c.rhs) : c.rhs;
}

std::optional<Witness> find_witness(const LinearSystem& system) {
  const std::size_t n = system.variable_count();
  const std::size_t m = system.constraints().size();
  // Columns: x+ (n), x- (n), surplus s (m); row j: g x+ - g x- - s_j = h_j.
  const std::size_t columns = 2 * n + m;
  std::vector<Row> a(m, Row(columns, Rational(0)));
  std::vector<Rational> b(m);
  Row g;
  for (std::size_t j = 0; j < m; ++j) {
    ge_form(system.constraints()[j], n, g, b[j]);
    for (std::size_t i = 0; i < n; ++i) {
      a[j][i] = g[i];
      a[j][n + i] = -g[i];
    }
    a[j][2 * n + j] = -1;
    // With h <= 0 the negated row has a +1 surplus column: a ready basis.
    if (b[j] <= 0) {
      for (auto& x : a[j]) x = -x;
      b[j] = -b[j];
    }
  }
  auto y = phase_one(std::move(a), std::move(b), columns);
  if (!y) return std::nullopt;
  Witness w;
  w.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) w.values[i] = (*y)[i] - (*y)[n + i];
  return w;
}

std::optional<FarkasCertificate> find_farkas(const LinearSystem& system) {
  const std::size_t n = system.variable_count();
  const std::size_t m = system.constraints().size();
  // Rows: G^T y = 0 (n rows), h^T y = 1; columns y (m).
  std::vector<Row> a(n + 1, Row(m, Rational(0)));
  std::vector<Rational> b(n + 1, Rational(0));
  b[n] = 1;
  Row g;
  Rational h;
  for (std::size_t j = 0; j < m; ++j) {
    ge_form(system.constraints()[j], n, g, h);
    for (std::size_t i = 0; i < n; ++i) a[i][j] = g[i];
    a[n][j] = h;
  }
  auto y = phase_one(std::move(a), std::move(b), m);
  if (!y) return std::nullopt;

  // Scale to the primitive integer vector on the same ray.
  BigInt lcm_den = 1;
  for (const auto& v : *y) lcm_den = lcm(lcm_den, BigInt(v.get_den()));
  BigInt gcd_num = 0;
  for (const auto& v : *y) gcd_num = gcd(gcd_num, BigInt(v.get_num() * (lcm_den / v.get_den())));
  FarkasCertificate cert;
  for (const auto& v : *y) {
    Rational scaled = v * Rational(lcm_den) / Rational(gcd_num);
    scaled.canonicalize();
    cert.multipliers.push_back(std::move(scaled));
  }
  cert.bound = combine(system, cert.multipliers).rhs;
  return cert;
}

}  // namespace

LinearCombination combine(const LinearSystem& system, const std::vector<Rational>& multipliers) {
  if (multipliers.size() != system.constraints().size()) {
    throw ContractViolation("one multiplier per constraint is required");
  }
  LinearCombination out;
  out.rhs = 0;
  for (std::size_t j = 0; j < multipliers.size(); ++j) {
    const Rational& y = multipliers[j];
    if (y == 0) continue;
    const Constraint& c = system.constraints()[j];
    const Rational sign = c.relation == Relation::kLessEqual ? -1 : 1;
    for (const auto& [var, coef] : c.terms) out.terms[var] += sign * y * coef;
    out.rhs += sign * y * c.rhs;
  }
  for (auto it = out.terms.begin(); it != out.terms.end();) {
    it = it->second == 0 ? out.terms.erase(it) : std::next(it);
  }
  return out;
}

namespace {

std::string plain(const Rational& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : q.get_str();
}

std::string format_terms(const LinearSystem& system, const std::map<std::size_t, Rational>& terms) {
  std::string out;
  for (const auto& [var, coef] : terms) {
    if (!out.empty()) out += coef < 0 ? " - " : " + ";
    else if (coef < 0) out += "-";
    const Rational magnitude = abs(coef);
    if (magnitude != 1) out += plain(magnitude) + "*";
    out += system.variables()[var];
  }
  if (out.empty()) out = "0";
  return out;
}

}  // namespace

std::string format_combination(const LinearSystem& system, const LinearCombination& combination) {
  return format_terms(system, combination.terms) + " >= " + plain(combination.rhs);
}

std::string format_constraint(const LinearSystem& system, const Constraint& constraint) {
  return format_terms(system, constraint.terms) +
         (constraint.relation == Relation::kGreaterEqual ? " >= " : " <= ") +
         plain(constraint.rhs);
}

bool satisfies(const LinearSystem& system, const Witness& witness) {
  if (witness.values.size() != system.variable_count()) return false;
  for (const auto& c : system.constraints()) {
    Rational lhs = 0;
    for (const auto& [var, coef] : c.terms) lhs += coef * witness.values[var];
    const bool ok = c.relation == Relation::kGreaterEqual ? lhs >= c.rhs : lhs <= c.rhs;
    if (!ok) return false;
  }
  return true;
}

bool verify_farkas(const LinearSystem& system, const FarkasCertificate& certificate) {
  if (certificate.multipliers.size() != system.constraints().size()) return false;
  for (const auto& y : certificate.multipliers) {
    if (y < 0) return false;
  }
  const auto combined = combine(system, certificate.multipliers);
  return combined.terms.empty() && combined.rhs > 0 && combined.rhs == certificate.bound;
}

FeasibilityOutcome lp_feasible(const LinearSystem& system) {
  if (auto witness = find_witness(system)) {
    if (!satisfies(system, *witness)) throw Error("simplex: witness failed exact re-check");
    return FeasibilityOutcome{std::move(*witness)};
  }
  auto cert = find_farkas(system);
  if (!cert || !verify_farkas(system, *cert)) {
    throw Error("simplex: infeasible system without a verifiable Farkas certificate");
  }
  return FeasibilityOutcome{std::move(*cert)};
}

}  // namespace embedsim
