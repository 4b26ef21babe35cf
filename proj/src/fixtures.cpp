#include "embedsim/fixtures.hpp"

#include "embedsim/errors.hpp"

namespace embedsim {

const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> all = {
      {"CE1", "two conjunctive rules sharing a head; not simulable by (avg, dot)",
       "atoms: a b c d x\n"
       "rule: a & b -> x\n"
       "rule: c & d -> x\n"},
      {"CE2", "two heads over crossed pairs; not simulable by (avg, dist)",
       "atoms: a b c d x y\n"
       "rule: a & b -> x\n"
       "rule: c & d -> x\n"
       "rule: a & c -> y\n"
       "rule: b & d -> y\n"},
      {"CE3", "x on {ab, cd}, y on the four mixed pairs; not simulable by normalised sums",
       "atoms: a b c d x y\n"
       "rule: a & b -> x\n"
       "rule: c & d -> x\n"
       "rule: a & c -> y\n"
       "rule: b & d -> y\n"
       "rule: a & d -> y\n"
       "rule: b & c -> y\n"},
      {"CE4", "CE3 plus one z atom per pair forcing positive pairwise cosines",
       "atoms: a b c d x y z_ab z_ac z_ad z_bc z_bd z_cd\n"
       "rule: a & b -> x\n"
       "rule: c & d -> x\n"
       "rule: a & c -> y\n"
       "rule: b & d -> y\n"
       "rule: a & d -> y\n"
       "rule: b & c -> y\n"
       "rule: a -> z_ab\n"
       "rule: b -> z_ab\n"
       "rule: a -> z_ac\n"
       "rule: c -> z_ac\n"
       "rule: a -> z_ad\n"
       "rule: d -> z_ad\n"
       "rule: b -> z_bc\n"
       "rule: c -> z_bc\n"
       "rule: b -> z_bd\n"
       "rule: d -> z_bd\n"
       "rule: c -> z_cd\n"
       "rule: d -> z_cd\n"},
      {"EX4", "stratified topic example: apple suggests food, apple with safari technology",
       "# cat:nature is declared but unconstrained\n"
       "atoms: apple safari cat:technology cat:food cat:nature\n"
       "stratum: !cat:technology | !cat:food\n"
       "stratum: apple & safari -> cat:technology\n"
       "stratum: apple -> cat:food\n"},
      {"ORD-NM", "a defeasible default (a -> x) with an exception (a & b inconsistent)",
       "atoms: a b x\n"
       "stratum: a & b -> FALSE\n"
       "stratum: a -> x\n"},
      {"MPF", "mother is exactly a female parent",
       "atoms: parent female mother\n"
       "formula: mother <-> parent & female\n"},
      {"HAD-SYM", "a single rule whose converse is not entailed",
       "atoms: a b\n"
       "rule: a -> b\n"},
  };
  return all;
}

const Fixture& fixture(std::string_view name) {
  for (const auto& f : fixtures()) {
    if (f.name == name) return f;
  }
  std::string known;
  for (const auto& f : fixtures()) known += (known.empty() ? "" : ", ") + f.name;
  throw ContractViolation("unknown fixture '" + std::string(name) + "' (known: " + known + ")");
}

ParsedKB parse_fixture(const Fixture& f) { return parse_kb(f.source); }

KnowledgeBase fixture_kb(std::string_view name) {
  auto parsed = parse_fixture(fixture(name));
  if (auto* kb = std::get_if<KnowledgeBase>(&parsed)) return std::move(*kb);
  throw ContractViolation("fixture '" + std::string(name) + "' is stratified");
}

StratifiedKB fixture_theta(std::string_view name) {
  auto parsed = parse_fixture(fixture(name));
  if (auto* theta = std::get_if<StratifiedKB>(&parsed)) return std::move(*theta);
  throw ContractViolation("fixture '" + std::string(name) + "' is not stratified");
}

}  // namespace embedsim
