#pragma once

#include <optional>
#include <string>
#include <vector>

#include "embedsim/logic.hpp"
#include "embedsim/rational.hpp"
#include "embedsim/strategies.hpp"
#include "json.hpp"

namespace embedsim {

inline constexpr std::size_t kMonotonicConstructionCap = 15;
inline constexpr std::size_t kRankedConstructionCap = 12;

// The penalty base used by the model-indexed constructions. Must exceed
// 2^|A|; the smallest legal value 2^|A| + 1 is the default.
struct DeltaConfig {
  BigInt delta;

  static DeltaConfig minimal(std::size_t atoms);
  // Throws ContractViolation unless delta > 2^atoms.
  static DeltaConfig checked(BigInt delta, std::size_t atoms);
  // No bound check. Only for probing what goes wrong below the bound.
  static DeltaConfig unchecked(BigInt delta) { return DeltaConfig{std::move(delta)}; }
};

enum class Construction {
  kAvgRelu = 1,        // monotonic, average pooling + ReLU labelling
  kHadDot = 2,         // monotonic, Hadamard pooling + dot labelling, untied
  kOrd = 3,            // monotonic, max pooling + product order
  kAvgReluRanked = 4,  // stratified, average pooling + ReLU labelling
  kHadDotRanked = 5,   // stratified, Hadamard pooling + dot labelling, untied
};

struct ConstructionResult {
  AttributeEmbedding embedding;
  StrategyId strategy;
  Construction construction;
  std::optional<BigInt> delta;              // absent for the order construction
  std::vector<Interpretation> model_order;  // coordinate i <-> model_order[i]
};

ConstructionResult construct_avg_relu(const KnowledgeBase& kb,
                                      std::optional<DeltaConfig> delta = std::nullopt);
ConstructionResult construct_had_dot(const KnowledgeBase& kb,
                                     std::optional<DeltaConfig> delta = std::nullopt);
ConstructionResult construct_ord(const KnowledgeBase& kb);
ConstructionResult construct_avg_relu_nm(const StratifiedKB& theta,
                                         std::optional<DeltaConfig> delta = std::nullopt);
ConstructionResult construct_had_dot_nm(const StratifiedKB& theta,
                                        std::optional<DeltaConfig> delta = std::nullopt);

// Embedding JSON plus {"provenance": {"proposition", "strategy", "delta", "model_order"}}.
nlohmann::ordered_json to_json(const ConstructionResult& result);

}  // namespace embedsim
