#include "embedsim/constructors.hpp"

#include "embedsim/errors.hpp"

namespace embedsim {
namespace {

BigInt power_of_two(std::size_t n) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), 2, n);
  return out;
}

BigInt power(const BigInt& base, std::size_t exponent) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

void check_cap(const Signature& sig, std::size_t cap, const char* what) {
  if (sig.size() > cap) {
    throw CapExceeded(std::string(what) + " supports at most " + std::to_string(cap) +
                      " atoms, got " + std::to_string(sig.size()));
  }
}

DeltaConfig resolve(const std::optional<DeltaConfig>& delta, std::size_t atoms) {
  return delta ? *delta : DeltaConfig::minimal(atoms);
}

std::vector<Interpretation> all_interpretations(const Signature& sig) {
  std::vector<Interpretation> out;
  const std::uint64_t count = std::uint64_t{1} << sig.size();
  out.reserve(count);
  for (std::uint64_t bits = 0; bits < count; ++bits) out.push_back(Interpretation{bits});
  return out;
}

AttributeVectors tied_atom(const std::string& name, Vector context) {
  AttributeVectors a{name, std::move(context), {}, 0, 0};
  a.output = a.context;
  return a;
}

}  // namespace

DeltaConfig DeltaConfig::minimal(std::size_t atoms) {
  return DeltaConfig{power_of_two(atoms) + 1};
}

DeltaConfig DeltaConfig::checked(BigInt delta, std::size_t atoms) {
  if (delta <= power_of_two(atoms)) {
    throw ContractViolation("delta must exceed 2^" + std::to_string(atoms) + " = " +
                            power_of_two(atoms).get_str());
  }
  return DeltaConfig{std::move(delta)};
}

ConstructionResult construct_avg_relu(const KnowledgeBase& kb, std::optional<DeltaConfig> delta) {
  check_cap(kb.signature, kMonotonicConstructionCap, "the average/ReLU construction");
  const BigInt d = resolve(delta, kb.signature.size()).delta;
  const auto models = enumerate_models(kb, kMonotonicConstructionCap);
  const std::size_t l = models.size();
  const Rational penalty(-d);

  std::vector<AttributeVectors> atoms;
  for (std::size_t a = 0; a < kb.signature.size(); ++a) {
    Vector v(l + 1, Rational(1));
    for (std::size_t i = 0; i < l; ++i) {
      if (!models[i].holds(a)) v[i] = penalty;
    }
    atoms.push_back(tied_atom(kb.signature.name(a), std::move(v)));
  }
  return ConstructionResult{AttributeEmbedding(l + 1, std::move(atoms)),
                            StrategyId{Pooling::kAvg, Labelling::kRelu, true},
                            Construction::kAvgRelu, d, models};
}

ConstructionResult construct_had_dot(const KnowledgeBase& kb, std::optional<DeltaConfig> delta) {
  check_cap(kb.signature, kMonotonicConstructionCap, "the Hadamard/dot construction");
  const BigInt d = resolve(delta, kb.signature.size()).delta;
  const auto models = enumerate_models(kb, kMonotonicConstructionCap);
  const std::size_t l = models.size();
  const Rational penalty(-d);

  std::vector<AttributeVectors> atoms;
  for (std::size_t a = 0; a < kb.signature.size(); ++a) {
    AttributeVectors attr{kb.signature.name(a), Vector(l + 1, Rational(1)),
                          Vector(l + 1, Rational(1)), 0, 0};
    for (std::size_t i = 0; i < l; ++i) {
      if (!models[i].holds(a)) {
        attr.context[i] = 0;
        attr.output[i] = penalty;
      }
    }
    atoms.push_back(std::move(attr));
  }
  return ConstructionResult{AttributeEmbedding(l + 1, std::move(atoms)),
                            StrategyId{Pooling::kHad, Labelling::kDot, false},
                            Construction::kHadDot, d, models};
}

ConstructionResult construct_ord(const KnowledgeBase& kb) {
  check_cap(kb.signature, kMonotonicConstructionCap, "the order construction");
  const auto models = enumerate_models(kb, kMonotonicConstructionCap);
  // An inconsistent KB entails every rule; all-zero vectors capture every rule.
  const std::size_t dimension = models.empty() ? 1 : models.size();

  std::vector<AttributeVectors> atoms;
  for (std::size_t a = 0; a < kb.signature.size(); ++a) {
    Vector v(dimension, Rational(0));
    for (std::size_t i = 0; i < models.size(); ++i) {
      if (!models[i].holds(a)) v[i] = 1;
    }
    atoms.push_back(tied_atom(kb.signature.name(a), std::move(v)));
  }
  return ConstructionResult{AttributeEmbedding(dimension, std::move(atoms)),
                            StrategyId{Pooling::kOrd, Labelling::kOrd, true}, Construction::kOrd,
                            std::nullopt, models};
}

namespace {

// Rank-weighted coordinates: delta^(2 mu) where the atom holds,
// -delta^(1 + 2 mu) where it does not.
struct RankedWeights {
  std::vector<Interpretation> order;
  std::vector<Rational> positive;
  std::vector<Rational> negative;
};

RankedWeights ranked_weights(const StratifiedKB& theta, const BigInt& delta) {
  RankedWeights w;
  w.order = all_interpretations(theta.signature);
  for (Interpretation omega : w.order) {
    const std::size_t mu = rank_mu(theta, omega);
    w.positive.emplace_back(power(delta, 2 * mu));
    w.negative.emplace_back(-power(delta, 1 + 2 * mu));
  }
  return w;
}

}  // namespace

ConstructionResult construct_avg_relu_nm(const StratifiedKB& theta,
                                         std::optional<DeltaConfig> delta) {
  check_cap(theta.signature, kRankedConstructionCap, "the ranked average/ReLU construction");
  const BigInt d = resolve(delta, theta.signature.size()).delta;
  const auto w = ranked_weights(theta, d);
  const std::size_t m = w.order.size();

  std::vector<AttributeVectors> atoms;
  for (std::size_t a = 0; a < theta.signature.size(); ++a) {
    Vector v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = w.order[i].holds(a) ? w.positive[i] : w.negative[i];
    atoms.push_back(tied_atom(theta.signature.name(a), std::move(v)));
  }
  return ConstructionResult{AttributeEmbedding(m, std::move(atoms)),
                            StrategyId{Pooling::kAvg, Labelling::kRelu, true},
                            Construction::kAvgReluRanked, d, w.order};
}

ConstructionResult construct_had_dot_nm(const StratifiedKB& theta,
                                        std::optional<DeltaConfig> delta) {
  check_cap(theta.signature, kRankedConstructionCap, "the ranked Hadamard/dot construction");
  const BigInt d = resolve(delta, theta.signature.size()).delta;
  const auto w = ranked_weights(theta, d);
  const std::size_t m = w.order.size();

  std::vector<AttributeVectors> atoms;
  for (std::size_t a = 0; a < theta.signature.size(); ++a) {
    AttributeVectors attr{theta.signature.name(a), Vector(m), Vector(m), 0, 0};
    for (std::size_t i = 0; i < m; ++i) {
      const bool holds = w.order[i].holds(a);
      attr.context[i] = holds ? 1 : 0;
      attr.output[i] = holds ? w.positive[i] : w.negative[i];
    }
    atoms.push_back(std::move(attr));
  }
  return ConstructionResult{AttributeEmbedding(m, std::move(atoms)),
                            StrategyId{Pooling::kHad, Labelling::kDot, false},
                            Construction::kHadDotRanked, d, w.order};
}

nlohmann::ordered_json to_json(const ConstructionResult& result) {
  auto j = to_json(result.embedding);
  nlohmann::ordered_json provenance;
  provenance["proposition"] = std::to_string(static_cast<int>(result.construction));
  provenance["strategy"] = result.strategy.name();
  provenance["delta"] = result.delta ? nlohmann::ordered_json(result.delta->get_str())
                                     : nlohmann::ordered_json(nullptr);
  auto order = nlohmann::ordered_json::array();
  for (Interpretation omega : result.model_order) order.push_back(omega.bits);
  provenance["model_order"] = std::move(order);
  j["provenance"] = std::move(provenance);
  return j;
}

}  // namespace embedsim
