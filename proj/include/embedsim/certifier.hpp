#pragma once

#include <optional>
#include <string>
#include <vector>

#include "embedsim/fixtures.hpp"
#include "embedsim/logic.hpp"
#include "embedsim/lp.hpp"
#include "embedsim/strategies.hpp"
#include "json.hpp"

namespace embedsim {

// ---------------------------------------------------------------------------
// LP encodings. Strict inequalities use a unit margin: both systems are
// positively homogeneous, so any strict solution rescales to margin 1.
// Rows are stored with denominators cleared (multiplied by |S| or |S|^2).

struct AvgDotSystem {
  LinearSystem system;
  std::vector<Query> queries;  // constraint j encodes queries[j]
  std::vector<bool> captured;  // oracle verdict for queries[j]
  std::size_t atoms = 0;

  // Variable index of M[a][b] = a . out_b and of lambda_b.
  std::size_t matrix_var(std::size_t a, std::size_t b) const { return a * atoms + b; }
  std::size_t lambda_var(std::size_t b) const { return atoms * atoms + b; }
};

// One constraint per query:  sum_{a in S} M[a][b] >= |S| lambda_b  when the
// rule must be captured, and  sum_{a in S} M[a][b] <= |S| (lambda_b - 1)
// otherwise.
AvgDotSystem build_avg_dot_system(const ConsequenceRelation& relation,
                                  const std::vector<Query>& queries);
AvgDotSystem build_avg_dot_system(const ConsequenceRelation& relation, std::size_t subset_cap);

struct AvgDistRelaxation {
  LinearSystem system;
  std::vector<Query> queries;
  std::vector<bool> captured;
  std::size_t atoms = 0;

  std::size_t gram_var(std::size_t a, std::size_t a2) const;  // G[a][a2], symmetric
  std::size_t cross_var(std::size_t b, std::size_t a) const;   // c[b][a] = out_b . a
  std::size_t norm_var(std::size_t b) const;                   // n[b] = |out_b|^2
  std::size_t radius_var(std::size_t b) const;                 // t[b] = theta_b^2
};

// Squared distance between the average of S and out_b, expanded over the
// Gram/cross/norm variables and scaled by |S|^2; <= t[b] when captured,
// >= t[b] + 1 otherwise. Positive semidefiniteness of G is not encoded, so a
// feasible relaxation proves nothing.
AvgDistRelaxation build_avg_dist_relaxation(const ConsequenceRelation& relation,
                                            const std::vector<Query>& queries);
AvgDistRelaxation build_avg_dist_relaxation(const ConsequenceRelation& relation,
                                            std::size_t subset_cap);

// Context vectors are the standard basis; out_b has coordinates M[.][b], so
// a_i . out_b = M[a_i][b].
AttributeEmbedding realize_from_matrix(const Signature& signature,
                                       const std::vector<std::vector<Rational>>& matrix,
                                       const std::vector<Rational>& lambdas);
// Reads M and lambda from a feasible outcome. Throws ContractViolation when
// the outcome is infeasible.
AttributeEmbedding realize_from_outcome(const AvgDotSystem& system, const Signature& signature,
                                        const FeasibilityOutcome& outcome);

// ---------------------------------------------------------------------------
// Conical closure. Closed half-spaces through the origin are closed under
// conical combination; if both base vectors of a pair lie in H+ then so does
// every conical combination of them.

enum class Side { kPositive, kNegative };
enum class Placement { kNegative, kOnHyperplane, kPositive };

std::string to_string(Side side);
std::string to_string(Placement placement);

// The pooled vector of {first, second} must lie strictly on `side`.
struct PairRequirement {
  std::size_t first = 0;
  std::size_t second = 0;
  Side side = Side::kNegative;
};

struct ConicalRequirement {
  std::vector<std::string> base_points;
  std::vector<PairRequirement> pairs;
};

struct RefutedCase {
  std::vector<Placement> placement;   // one per base point
  std::size_t violated_requirement;   // index into pairs
};

struct ConicalOutcome {
  bool consistent = false;
  std::vector<Placement> assignment;  // satisfying placement when consistent
  std::vector<RefutedCase> trace;     // every refuted case, in search order
  std::size_t cases_examined = 0;
};

// Exhaustive search over all 3^n placements of the base points; stops at the
// first consistent placement. Throws ContractViolation for degenerate input.
ConicalOutcome conical_closure_certify(const ConicalRequirement& requirement);

// Re-checks every trace entry independently; true iff all refutations hold
// and, for an inconsistent outcome, the trace covers all 3^n placements.
bool replay_trace(const ConicalRequirement& requirement, const ConicalOutcome& outcome);

// Pair requirements w.r.t. the hyperplane separating two heads x and y:
// pairs capturing x but not y must be strictly negative, pairs capturing y
// but not x strictly positive.
ConicalRequirement derive_conical_requirement(const ConsequenceRelation& relation,
                                              const std::vector<std::size_t>& base,
                                              std::size_t x, std::size_t y);

// ---------------------------------------------------------------------------
// Certificates

enum class Verdict { kSimulable, kNotSimulable, kInconclusive };
std::string to_string(Verdict verdict);

struct Certificate {
  StrategyId strategy;
  std::string fixture;
  RelationKind relation = RelationKind::kMonotonic;
  Verdict verdict = Verdict::kInconclusive;
  // "decided" for LP/argument certificates, "certified-under-lemma" when the
  // result rests on declared assumptions.
  std::string evidence_kind;
  nlohmann::ordered_json evidence;
  std::vector<std::string> assumptions;
  bool reverified = false;
};

nlohmann::ordered_json to_json(const Certificate& certificate);

// Dispatches on the strategy. With kNonMonotonic the fixture KB K is lifted to
// the single-stratum base (/\ K) and all oracle answers come from the ranked
// relation. Throws ContractViolation for a fixture/strategy pair without a
// matching engine.
Certificate certify_strategy_failure(const StrategyId& strategy, const Fixture& fixture,
                                     RelationKind relation = RelationKind::kMonotonic);

// Decides (avg, dot) simulability of an arbitrary KB over all nonempty
// antecedents up to the cap. |A| <= 6.
inline constexpr std::size_t kGenericAvgDotCap = 6;
Certificate certify_avg_dot(const KnowledgeBase& kb, const std::string& name,
                            std::optional<std::size_t> subset_cap = std::nullopt);

// Certificate for an explicit stratified KB (the fixture case above lifts a
// monotonic KB; this takes one as-is).
Certificate certify_avg_dot(const StratifiedKB& theta, const std::string& name,
                            std::optional<std::size_t> subset_cap = std::nullopt);

}  // namespace embedsim
