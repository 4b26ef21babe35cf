#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "embedsim/certifier.hpp"
#include "embedsim/rational.hpp"
#include "embedsim/strategies.hpp"
#include "json.hpp"

namespace embedsim {

struct Table1Cell {
  bool supported = false;     // true: simulates every KB; false: some KB fails
  // "construction", "decided" or "certified-under-lemma".
  std::string evidence_kind;
  std::string summary;        // one-line evidence pointer
  bool reverified = false;
  nlohmann::ordered_json detail;
};

struct Table1Row {
  StrategyId strategy;
  Table1Cell monotonic;
  Table1Cell nonmonotonic;
  // Sigmoid rows only: floating-point corroboration, not used for verdicts.
  std::optional<nlohmann::ordered_json> numeric_diagnostics;
};

struct Table1Options {
  // 0 = hardware concurrency.
  unsigned threads = 0;
  std::uint64_t seed = 0;
  // Subset cap for the verification sweeps (default per KB size).
  std::optional<std::size_t> subset_cap;
  // Override for the penalty base; must exceed 2^|A| on every fixture used.
  std::optional<BigInt> delta;
};

struct Table1Report {
  std::vector<Table1Row> rows;  // row order of table1_strategies()
};

// Runs every cell. Any failed verification, non-reverified certificate or
// inconclusive verdict throws Error naming the cell.
Table1Report run_table1(const Table1Options& options = {});

nlohmann::ordered_json to_json(const Table1Report& report);
std::string to_markdown(const Table1Report& report);

}  // namespace embedsim
