#include "embedsim/strategies.hpp"

#include <algorithm>

#include "embedsim/errors.hpp"

namespace embedsim {

// ---------------------------------------------------------------------------
// StrategyId

namespace {

const char* pooling_name(Pooling p) {
  switch (p) {
    case Pooling::kAvg: return "avg";
    case Pooling::kNorm: return "norm";
    case Pooling::kHad: return "had";
    case Pooling::kOrd: return "ord";
    case Pooling::kSig: return "sig";
  }
  return "?";
}

const char* labelling_name(Labelling l) {
  switch (l) {
    case Labelling::kDot: return "dot";
    case Labelling::kDist: return "dist";
    case Labelling::kRelu: return "relu";
    case Labelling::kOrd: return "ord";
  }
  return "?";
}

}  // namespace

std::string StrategyId::name() const {
  std::string out = std::string(pooling_name(pooling)) + "-" + labelling_name(labelling);
  // RELU and ORD labelling are tied by definition; only Hadamard/dot has a
  // separate tied row.
  if (tied_vectors && pooling == Pooling::kHad) out += "-tied";
  return out;
}

StrategyId StrategyId::parse(std::string_view name) {
  for (const auto& s : table1_strategies()) {
    if (s.name() == name) return s;
  }
  std::string known;
  for (const auto& s : table1_strategies()) known += (known.empty() ? "" : ", ") + s.name();
  throw Error("unknown strategy '" + std::string(name) + "' (known: " + known + ")");
}

const std::vector<StrategyId>& table1_strategies() {
  static const std::vector<StrategyId> rows = {
      {Pooling::kAvg, Labelling::kDot, false},  {Pooling::kAvg, Labelling::kDist, false},
      {Pooling::kNorm, Labelling::kDot, false}, {Pooling::kNorm, Labelling::kDist, false},
      {Pooling::kSig, Labelling::kDot, false},  {Pooling::kSig, Labelling::kDist, false},
      {Pooling::kAvg, Labelling::kRelu, true},  {Pooling::kHad, Labelling::kDot, false},
      {Pooling::kHad, Labelling::kDot, true},   {Pooling::kOrd, Labelling::kOrd, true},
  };
  return rows;
}

bool is_exact(const StrategyId& strategy) { return strategy.pooling != Pooling::kSig; }

// ---------------------------------------------------------------------------
// AttributeEmbedding

namespace {

Signature signature_of(const std::vector<AttributeVectors>& atoms) {
  std::vector<std::string> names;
  names.reserve(atoms.size());
  for (const auto& a : atoms) names.push_back(a.name);
  return Signature(std::move(names));
}

}  // namespace

AttributeEmbedding::AttributeEmbedding(std::size_t dimension, std::vector<AttributeVectors> atoms)
    : dimension_(dimension), atoms_(std::move(atoms)), signature_(signature_of(atoms_)) {
  if (dimension_ == 0) throw DimensionMismatch("embedding dimension must be positive");
  for (const auto& a : atoms_) {
    if (a.context.size() != dimension_ || a.output.size() != dimension_) {
      throw DimensionMismatch("atom '" + a.name + "' has vectors of dimension " +
                              std::to_string(a.context.size()) + "/" +
                              std::to_string(a.output.size()) + ", expected " +
                              std::to_string(dimension_));
    }
    if (a.theta < 0) throw Error("atom '" + a.name + "' has a negative distance threshold");
  }
}

namespace {

nlohmann::ordered_json vector_json(const Vector& v) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& x : v) out.push_back(format_rational(x));
  return out;
}

Vector vector_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw Error(what + " must be an array of \"p/q\" strings");
  Vector out;
  out.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_string()) throw Error(what + " must contain \"p/q\" strings");
    out.push_back(parse_rational(x.get<std::string>()));
  }
  return out;
}

Rational rational_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_string()) throw Error(what + " must be a \"p/q\" string");
  return parse_rational(j.get<std::string>());
}

}  // namespace

nlohmann::ordered_json to_json(const AttributeEmbedding& embedding) {
  nlohmann::ordered_json j;
  j["dimension"] = embedding.dimension();
  auto atoms = nlohmann::ordered_json::array();
  for (const auto& a : embedding.atoms()) {
    nlohmann::ordered_json entry;
    entry["name"] = a.name;
    entry["context"] = vector_json(a.context);
    entry["output"] = vector_json(a.output);
    entry["lambda"] = format_rational(a.lambda);
    entry["theta"] = format_rational(a.theta);
    atoms.push_back(std::move(entry));
  }
  j["atoms"] = std::move(atoms);
  return j;
}

AttributeEmbedding embedding_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dimension") || !j.contains("atoms")) {
    throw Error("embedding JSON needs \"dimension\" and \"atoms\"");
  }
  if (!j["dimension"].is_number_unsigned()) throw Error("\"dimension\" must be a positive integer");
  const auto dimension = j["dimension"].get<std::size_t>();
  std::vector<AttributeVectors> atoms;
  for (const auto& entry : j["atoms"]) {
    if (!entry.contains("name") || !entry["name"].is_string() || !entry.contains("context")) {
      throw Error("each atom needs \"name\" and \"context\"");
    }
    AttributeVectors a;
    a.name = entry["name"].get<std::string>();
    a.context = vector_from_json(entry["context"], a.name + ".context");
    a.output = entry.contains("output") ? vector_from_json(entry["output"], a.name + ".output")
                                        : a.context;
    if (entry.contains("lambda")) a.lambda = rational_from_json(entry["lambda"], a.name + ".lambda");
    if (entry.contains("theta")) a.theta = rational_from_json(entry["theta"], a.name + ".theta");
    atoms.push_back(std::move(a));
  }
  return AttributeEmbedding(dimension, std::move(atoms));
}

// ---------------------------------------------------------------------------
// Pooling

namespace {

void require_nonempty(AtomSet s, const char* what) {
  if (s.empty()) throw ContractViolation(std::string(what) + " needs a nonempty antecedent");
}

void require_in_signature(const AttributeEmbedding& e, AtomSet s) {
  if ((s.bits & ~e.signature().full_mask()) != 0) {
    throw ContractViolation("antecedent references atoms outside the embedding");
  }
}

}  // namespace

Vector emb_avg(const AttributeEmbedding& e, AtomSet s) {
  require_nonempty(s, "average pooling");
  require_in_signature(e, s);
  Vector out = zeros(e.dimension());
  for (std::size_t a : s.atoms()) {
    const Vector& v = e.context(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += v[i];
  }
  const Rational n(static_cast<long>(s.size()));
  for (auto& x : out) x /= n;
  return out;
}

NormRepresentation emb_norm(const AttributeEmbedding& e, AtomSet s) {
  require_in_signature(e, s);
  Vector sum = zeros(e.dimension());
  for (std::size_t a : s.atoms()) {
    const Vector& v = e.context(a);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v[i];
  }
  Rational q = squared_norm(sum);
  return NormRepresentation{std::move(sum), std::move(q)};
}

Vector emb_had(const AttributeEmbedding& e, AtomSet s) {
  require_nonempty(s, "Hadamard pooling");
  require_in_signature(e, s);
  Vector out(e.dimension(), Rational(1));
  for (std::size_t a : s.atoms()) {
    const Vector& v = e.context(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= v[i];
  }
  return out;
}

Vector emb_ord(const AttributeEmbedding& e, AtomSet s) {
  require_nonempty(s, "max pooling");
  require_in_signature(e, s);
  const auto atoms = s.atoms();
  Vector out = e.context(atoms.front());
  for (std::size_t k = 1; k < atoms.size(); ++k) {
    const Vector& v = e.context(atoms[k]);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (v[i] > out[i]) out[i] = v[i];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Labelling

namespace {

Rational relu_dot(const Vector& entity, const Vector& b) {
  if (entity.size() != b.size()) throw DimensionMismatch("ReLU labelling dimension mismatch");
  Rational sum = 0;
  for (std::size_t i = 0; i < entity.size(); ++i) {
    if (entity[i] > 0 && b[i] != 0) sum += entity[i] * b[i];
  }
  return sum;
}

// Smallest slack e_i - b_i; b <= e iff it is non-negative.
Rational order_slack(const Vector& entity, const Vector& b) {
  if (entity.size() != b.size()) throw DimensionMismatch("order labelling dimension mismatch");
  Rational slack = entity.empty() ? Rational(0) : Rational(entity[0] - b[0]);
  for (std::size_t i = 1; i < entity.size(); ++i) {
    Rational d = entity[i] - b[i];
    if (d < slack) slack = std::move(d);
  }
  return slack;
}

// s >= lambda * sqrt(q) with q >= 0, exactly.
bool at_least_scaled_root(const Rational& s, const Rational& lambda, const Rational& q) {
  if (q == 0) return s >= 0;
  if (lambda <= 0) {
    if (s >= 0) return true;
    // Both sides negative: |s| <= |lambda| sqrt(q).
    return s * s <= lambda * lambda * q;
  }
  if (s <= 0) return false;
  return s * s >= lambda * lambda * q;
}

}  // namespace

bool lab_dot(const AttributeEmbedding& e, const Vector& entity, std::size_t b, bool tied) {
  return dot(entity, e.output(b, tied)) >= e.atom(b).lambda;
}

bool lab_dist(const AttributeEmbedding& e, const Vector& entity, std::size_t b, bool tied) {
  const Rational& theta = e.atom(b).theta;
  return squared_distance(entity, e.output(b, tied)) <= theta * theta;
}

bool lab_relu(const AttributeEmbedding& e, const Vector& entity, std::size_t b) {
  return relu_dot(entity, e.context(b)) >= 0;
}

bool lab_relu_thresholded(const AttributeEmbedding& e, const Vector& entity, std::size_t b) {
  return relu_dot(entity, e.context(b)) >= e.atom(b).lambda;
}

bool lab_ord(const AttributeEmbedding& e, const Vector& entity, std::size_t b) {
  return order_slack(entity, e.context(b)) >= 0;
}

bool lab_dot_on_norm(const AttributeEmbedding& e, const NormRepresentation& pooled, std::size_t b,
                     bool tied) {
  // A zero sum pools to the zero vector: 0 >= lambda.
  if (pooled.squared_norm == 0) return 0 >= e.atom(b).lambda;
  return at_least_scaled_root(dot(pooled.sum, e.output(b, tied)), e.atom(b).lambda,
                              pooled.squared_norm);
}

bool lab_dist_on_norm(const AttributeEmbedding& e, const NormRepresentation& pooled,
                      std::size_t b, bool tied) {
  const Vector& out = e.output(b, tied);
  const Rational& theta = e.atom(b).theta;
  const Rational out_sq = squared_norm(out);
  if (pooled.squared_norm == 0) return out_sq <= theta * theta;
  const Rational threshold = (1 + out_sq - theta * theta) / 2;
  return at_least_scaled_root(dot(pooled.sum, out), threshold, pooled.squared_norm);
}

// ---------------------------------------------------------------------------
// Generic dispatch

Pooled pool(const AttributeEmbedding& e, const StrategyId& strategy, AtomSet s) {
  switch (strategy.pooling) {
    case Pooling::kAvg: return Pooled{emb_avg(e, s), std::nullopt};
    case Pooling::kHad: return Pooled{emb_had(e, s), std::nullopt};
    case Pooling::kOrd: return Pooled{emb_ord(e, s), std::nullopt};
    case Pooling::kNorm: {
      auto rep = emb_norm(e, s);
      return Pooled{std::move(rep.sum), std::move(rep.squared_norm)};
    }
    case Pooling::kSig:
      throw ContractViolation("sigmoid pooling has no exact evaluator");
  }
  throw ContractViolation("unknown pooling function");
}

LabelDecision label(const AttributeEmbedding& e, const StrategyId& strategy, const Pooled& pooled,
                    std::size_t b) {
  const bool tied = strategy.tied_vectors;
  const AttributeVectors& atom = e.atom(b);
  if (strategy.pooling == Pooling::kNorm) {
    NormRepresentation rep{pooled.vector, pooled.squared_norm.value_or(Rational(0))};
    const Rational s = dot(rep.sum, e.output(b, tied));
    const std::string detail =
        "sum.out=" + format_rational(s) + " |sum|^2=" + format_rational(rep.squared_norm);
    if (strategy.labelling == Labelling::kDot) {
      return {lab_dot_on_norm(e, rep, b, tied), detail + " lambda=" + format_rational(atom.lambda)};
    }
    if (strategy.labelling == Labelling::kDist) {
      return {lab_dist_on_norm(e, rep, b, tied), detail + " theta=" + format_rational(atom.theta)};
    }
    throw ContractViolation("normalised pooling supports dot and dist labelling only");
  }

  switch (strategy.labelling) {
    case Labelling::kDot: {
      const Rational margin = dot(pooled.vector, e.output(b, tied)) - atom.lambda;
      return {margin >= 0, "dot-lambda=" + format_rational(margin)};
    }
    case Labelling::kDist: {
      const Rational margin =
          atom.theta * atom.theta - squared_distance(pooled.vector, e.output(b, tied));
      return {margin >= 0, "theta^2-d^2=" + format_rational(margin)};
    }
    case Labelling::kRelu: {
      const Rational value = relu_dot(pooled.vector, e.context(b));
      return {value >= 0, "relu.b=" + format_rational(value)};
    }
    case Labelling::kOrd: {
      const Rational slack = order_slack(pooled.vector, e.context(b));
      return {slack >= 0, "min(e-b)=" + format_rational(slack)};
    }
  }
  throw ContractViolation("unknown labelling function");
}

bool captures(const AttributeEmbedding& e, const StrategyId& strategy, AtomSet s, std::size_t b) {
  return label(e, strategy, pool(e, strategy, s), b).captured;
}

}  // namespace embedsim
