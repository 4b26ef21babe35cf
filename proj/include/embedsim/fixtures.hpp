#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "embedsim/logic.hpp"

namespace embedsim {

// A bundled knowledge base in the KB text format.
struct Fixture {
  std::string name;
  std::string description;
  std::string source;
};

// CE1..CE4, EX4, ORD-NM, MPF (mother/parent/female), HAD-SYM.
const std::vector<Fixture>& fixtures();

// Throws ContractViolation for unknown names.
const Fixture& fixture(std::string_view name);

ParsedKB parse_fixture(const Fixture& f);
// Throw ContractViolation if the fixture is of the other kind.
KnowledgeBase fixture_kb(std::string_view name);
StratifiedKB fixture_theta(std::string_view name);

}  // namespace embedsim
