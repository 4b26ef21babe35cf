#pragma once

#include <optional>
#include <string>
#include <vector>

#include "embedsim/logic.hpp"
#include "embedsim/strategies.hpp"
#include "json.hpp"

namespace embedsim {

struct Mismatch {
  Query query;
  std::vector<std::string> antecedent;
  std::string head;
  bool expected = false;  // logical verdict
  bool got = false;       // embedding verdict
  std::string score;      // exact labelling score behind `got`
};

struct VerificationReport {
  StrategyId strategy;
  RelationKind relation = RelationKind::kMonotonic;
  std::string kb_hash;
  std::size_t subset_cap = 0;
  std::size_t queries_checked = 0;
  std::vector<Mismatch> mismatches;  // canonical query order
  std::vector<std::string> annotations;
  double elapsed_ms = 0;

  bool simulates() const { return mismatches.empty(); }
};

struct VerificationOptions {
  // Default: |A| when |A| <= 8, otherwise 4.
  std::optional<std::size_t> subset_cap;
  // Check exactly these queries instead of the full sweep.
  std::optional<std::vector<Query>> queries;
  // 0 = hardware concurrency.
  unsigned threads = 1;
};

std::size_t default_subset_cap(std::size_t atoms);

// FNV-1a over the canonical KB text, as 16 hex digits.
std::string kb_hash(const KnowledgeBase& kb);
std::string kb_hash(const StratifiedKB& theta);

// b captured from the pooled embedding of S  <=>  K |= S -> b, for every
// query. Throws DimensionMismatch if the embedding's atoms differ from the
// KB signature, ContractViolation for a strategy without an exact evaluator.
VerificationReport verify_monotonic(const AttributeEmbedding& embedding,
                                    const StrategyId& strategy, const KnowledgeBase& kb,
                                    const VerificationOptions& options = {});
VerificationReport verify_nonmonotonic(const AttributeEmbedding& embedding,
                                       const StrategyId& strategy, const StratifiedKB& theta,
                                       const VerificationOptions& options = {});
// Shared sweep against any consequence relation.
VerificationReport verify_relation(const AttributeEmbedding& embedding,
                                   const StrategyId& strategy,
                                   const ConsequenceRelation& relation, std::string hash,
                                   const VerificationOptions& options = {});

// Timing is excluded by default so reports are byte-reproducible.
nlohmann::ordered_json to_json(const VerificationReport& report, bool include_timing = false);

struct PropertyReport {
  bool holds = true;
  std::size_t checks = 0;
  std::vector<std::string> trace;   // first few checked instances
  std::optional<std::string> counterexample;
};

// S subset of S' implies Lab(max S) subset of Lab(max S'), for all subset pairs
// with |S'| <= cap (default: default_subset_cap).
PropertyReport check_ord_monotonicity(const AttributeEmbedding& embedding,
                                      std::optional<std::size_t> subset_cap = std::nullopt);

// Tied Hadamard/dot with threshold 0: b from {a} <=> a from {b}. Throws
// ContractViolation when some lambda is nonzero.
PropertyReport check_tied_hadamard_symmetry(const AttributeEmbedding& embedding);

nlohmann::ordered_json to_json(const PropertyReport& report);

}  // namespace embedsim
