#include "embedsim/certifier.hpp"
#include "embedsim/errors.hpp"

namespace embedsim {
namespace {

constexpr std::size_t kMaxBasePoints = 12;

// Placement number `index` in search order: base-3 digits, first base point
// least significant, digit order negative / on-hyperplane / positive.
std::vector<Placement> placement_at(std::size_t index, std::size_t n) {
  std::vector<Placement> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<Placement>(index % 3);
    index /= 3;
  }
  return out;
}

bool strictly_on(Placement p, Side side) {
  return side == Side::kNegative ? p == Placement::kNegative : p == Placement::kPositive;
}

// A conical combination of two points with neither strictly on `side` cannot
// be strictly on `side` either.
bool requirement_met(const PairRequirement& r, const std::vector<Placement>& placement) {
  return strictly_on(placement[r.first], r.side) || strictly_on(placement[r.second], r.side);
}

std::optional<std::size_t> first_violation(const ConicalRequirement& req,
                                           const std::vector<Placement>& placement) {
  for (std::size_t k = 0; k < req.pairs.size(); ++k) {
    if (!requirement_met(req.pairs[k], placement)) return k;
  }
  return std::nullopt;
}

std::size_t case_count(std::size_t n) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  return total;
}

void validate(const ConicalRequirement& req) {
  const std::size_t n = req.base_points.size();
  if (n == 0) throw ContractViolation("conical closure needs at least one base point");
  if (n > kMaxBasePoints) throw CapExceeded("conical closure over more than 12 base points");
  for (const auto& p : req.pairs) {
    if (p.first >= n || p.second >= n || p.first == p.second) {
      throw ContractViolation("pair requirement must name two distinct base points");
    }
  }
}

}  // namespace

std::string to_string(Side side) { return side == Side::kPositive ? "positive" : "negative"; }

std::string to_string(Placement placement) {
  switch (placement) {
    case Placement::kNegative:
      return "negative";
    case Placement::kOnHyperplane:
      return "on-hyperplane";
    case Placement::kPositive:
      return "positive";
  }
  return "?";
}

ConicalOutcome conical_closure_certify(const ConicalRequirement& requirement) {
  validate(requirement);
  const std::size_t n = requirement.base_points.size();
  const std::size_t total = case_count(n);
  ConicalOutcome out;
  for (std::size_t index = 0; index < total; ++index) {
    auto placement = placement_at(index, n);
    ++out.cases_examined;
    if (auto violated = first_violation(requirement, placement)) {
      out.trace.push_back(RefutedCase{std::move(placement), *violated});
    } else {
      out.consistent = true;
      out.assignment = std::move(placement);
      return out;
    }
  }
  return out;
}

bool replay_trace(const ConicalRequirement& requirement, const ConicalOutcome& outcome) {
  validate(requirement);
  const std::size_t n = requirement.base_points.size();
  for (const auto& c : outcome.trace) {
    if (c.placement.size() != n || c.violated_requirement >= requirement.pairs.size()) return false;
    if (requirement_met(requirement.pairs[c.violated_requirement], c.placement)) return false;
  }
  if (outcome.consistent) {
    return outcome.assignment.size() == n && !first_violation(requirement, outcome.assignment);
  }
  const std::size_t total = case_count(n);
  if (outcome.trace.size() != total) return false;
  for (std::size_t index = 0; index < total; ++index) {
    if (outcome.trace[index].placement != placement_at(index, n)) return false;
  }
  return true;
}

ConicalRequirement derive_conical_requirement(const ConsequenceRelation& relation,
                                              const std::vector<std::size_t>& base,
                                              std::size_t x, std::size_t y) {
  const Signature& sig = relation.signature();
  if (x >= sig.size() || y >= sig.size() || x == y) {
    throw ContractViolation("conical requirement needs two distinct heads");
  }
  ConicalRequirement req;
  for (std::size_t a : base) {
    if (a >= sig.size()) throw ContractViolation("base point outside the signature");
    req.base_points.push_back(sig.name(a));
  }
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t j = i + 1; j < base.size(); ++j) {
      const AtomSet s = AtomSet::of({base[i], base[j]});
      const bool cx = relation.holds(s, x);
      const bool cy = relation.holds(s, y);
      if (cx && !cy) req.pairs.push_back(PairRequirement{i, j, Side::kNegative});
      if (cy && !cx) req.pairs.push_back(PairRequirement{i, j, Side::kPositive});
    }
  }
  return req;
}

}  // namespace embedsim
