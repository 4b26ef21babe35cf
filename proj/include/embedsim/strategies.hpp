#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "embedsim/logic.hpp"
#include "embedsim/rational.hpp"
#include "json.hpp"

namespace embedsim {

enum class Pooling { kAvg, kNorm, kHad, kOrd, kSig };
enum class Labelling { kDot, kDist, kRelu, kOrd };

// A (pooling, labelling) pair. tied_vectors forces the output vector of each
// attribute to equal its context vector.
struct StrategyId {
  Pooling pooling = Pooling::kAvg;
  Labelling labelling = Labelling::kDot;
  bool tied_vectors = false;

  // "avg-dot", "had-dot-tied", ...
  std::string name() const;
  // Accepts exactly the names of table1_strategies(). Throws Error otherwise.
  static StrategyId parse(std::string_view name);

  bool operator==(const StrategyId&) const = default;
};

// The ten strategies of the overview table, in row order.
const std::vector<StrategyId>& table1_strategies();

// Every strategy except sigmoid pooling can be decided with exact arithmetic.
bool is_exact(const StrategyId& strategy);

struct AttributeVectors {
  std::string name;
  Vector context;  // used when pooling
  Vector output;   // compared against when labelling
  Rational lambda = 0;
  Rational theta = 0;
};

// Per-attribute context/output vectors and thresholds, all of one dimension.
class AttributeEmbedding {
 public:
  // Throws DimensionMismatch if any vector's size differs from `dimension`,
  // Error if a theta is negative or names do not form a valid signature.
  AttributeEmbedding(std::size_t dimension, std::vector<AttributeVectors> atoms);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return atoms_.size(); }
  const Signature& signature() const { return signature_; }
  const AttributeVectors& atom(std::size_t i) const { return atoms_.at(i); }
  const std::vector<AttributeVectors>& atoms() const { return atoms_; }

  const Vector& context(std::size_t i) const { return atoms_.at(i).context; }
  const Vector& output(std::size_t i, bool tied) const {
    return tied ? atoms_.at(i).context : atoms_.at(i).output;
  }

 private:
  std::size_t dimension_;
  std::vector<AttributeVectors> atoms_;
  Signature signature_;
};

nlohmann::ordered_json to_json(const AttributeEmbedding& embedding);
// Reads {"dimension", "atoms": [{"name","context","output","lambda","theta"}]}.
// "output", "lambda" and "theta" are optional (default: context, 0, 0).
AttributeEmbedding embedding_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Pooling. Antecedents are atom sets, so duplicates are already collapsed.

Vector emb_avg(const AttributeEmbedding& e, AtomSet s);

// Normalised sum kept unnormalised: the direction is `sum`, the norm is
// sqrt(squared_norm). S = {} or a zero sum gives the zero representation.
struct NormRepresentation {
  Vector sum;
  Rational squared_norm;
};
NormRepresentation emb_norm(const AttributeEmbedding& e, AtomSet s);

Vector emb_had(const AttributeEmbedding& e, AtomSet s);
Vector emb_ord(const AttributeEmbedding& e, AtomSet s);

// ---------------------------------------------------------------------------
// Labelling. `tied` selects the context vector as output vector.

// e . out_b >= lambda_b
bool lab_dot(const AttributeEmbedding& e, const Vector& entity, std::size_t b, bool tied = false);
// |e - out_b|^2 <= theta_b^2
bool lab_dist(const AttributeEmbedding& e, const Vector& entity, std::size_t b, bool tied = false);
// ReLU(e) . b >= 0 with tied vectors.
bool lab_relu(const AttributeEmbedding& e, const Vector& entity, std::size_t b);
// ReLU(e) . b >= lambda_b. No simulation result is claimed for this variant.
bool lab_relu_thresholded(const AttributeEmbedding& e, const Vector& entity, std::size_t b);
// b <= e component-wise, tied vectors.
bool lab_ord(const AttributeEmbedding& e, const Vector& entity, std::size_t b);

// (sum . out_b) >= lambda_b * |sum|, decided by sign analysis and squaring.
bool lab_dot_on_norm(const AttributeEmbedding& e, const NormRepresentation& pooled, std::size_t b,
                     bool tied = false);
// d(sum/|sum|, out_b) <= theta_b, via the unit-vector identity
// d^2 <= theta^2  <=>  e . out_b >= (1 + |out_b|^2 - theta^2) / 2.
bool lab_dist_on_norm(const AttributeEmbedding& e, const NormRepresentation& pooled,
                      std::size_t b, bool tied = false);

// Pooled entity for an exact strategy.
struct Pooled {
  Vector vector;                          // sum for NORM pooling
  std::optional<Rational> squared_norm;   // set for NORM pooling only
};

// Throws ContractViolation for sigmoid pooling or an empty antecedent where
// the pooling function needs one.
Pooled pool(const AttributeEmbedding& e, const StrategyId& strategy, AtomSet s);

struct LabelDecision {
  bool captured = false;
  std::string score;  // exact value behind the decision, for reports
};

LabelDecision label(const AttributeEmbedding& e, const StrategyId& strategy, const Pooled& pooled,
                    std::size_t b);

// pool + label for a single rule S -> b.
bool captures(const AttributeEmbedding& e, const StrategyId& strategy, AtomSet s, std::size_t b);

// ---------------------------------------------------------------------------
// Sigmoid pooling (floating point demonstrator, never used for verdicts).

struct SigmoidOptions {
  double kappa = 0.5;
  std::size_t iterations = 20000;
  std::uint64_t seed = 0;
};

double sigmoid(double x);

// sum_i log sigma(e . a_i) - kappa |e|^2
double sig_objective(const std::vector<double>& e, const std::vector<std::vector<double>>& atoms,
                     double kappa);
std::vector<double> sig_gradient(const std::vector<double>& e,
                                 const std::vector<std::vector<double>>& atoms, double kappa);

// Gradient ascent from a seeded random start; deterministic in
// (seed, iterations). Throws Error on a non-finite objective.
std::vector<double> emb_sig_numeric(const std::vector<std::vector<double>>& atoms,
                                    const SigmoidOptions& options);
std::vector<double> emb_sig_numeric(const AttributeEmbedding& e, AtomSet s,
                                    const SigmoidOptions& options);

std::vector<double> to_doubles(const Vector& v);

}  // namespace embedsim
