#include <gtest/gtest.h>

#include <random>

#include "embedsim/errors.hpp"
#include "embedsim/logic.hpp"
#include "support.hpp"

using namespace embedsim;

namespace {

ParseError parse_error(const std::string& text) {
  try {
    parse_kb(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no parse error for:\n" << text;
  return ParseError(0, 0, "");
}

}  // namespace

TEST(Parser, ReadsMonotonicKb) {
  const auto parsed = parse_kb("# comment\natoms: a b x\n\nrule: a & b -> x  # trailing\n");
  const auto& kb = std::get<KnowledgeBase>(parsed);
  EXPECT_EQ(kb.signature.names(), (std::vector<std::string>{"a", "b", "x"}));
  ASSERT_EQ(kb.formulas.size(), 1U);
  EXPECT_EQ(to_string(kb.formulas[0], kb.signature), "a & b -> x");
}

TEST(Parser, ReadsStratifiedKbInOrder) {
  const auto parsed = parse_kb("atoms: a b x\nstratum: a & b -> FALSE\nstratum: a -> x\n");
  const auto& theta = std::get<StratifiedKB>(parsed);
  ASSERT_EQ(theta.strata.size(), 2U);
  EXPECT_EQ(to_string(theta.strata[0], theta.signature), "a & b -> FALSE");
  EXPECT_EQ(to_string(theta.strata[1], theta.signature), "a -> x");
}

TEST(Parser, AtomNamesMayContainColons) {
  const auto parsed = parse_kb("atoms: apple cat:food\nrule: apple -> cat:food\n");
  EXPECT_EQ(std::get<KnowledgeBase>(parsed).signature.index_of("cat:food"), 1U);
}

TEST(Parser, OperatorPrecedence) {
  const Signature sig({"a", "b", "c"});
  // & binds tighter than |, | tighter than ->, -> tighter than <->.
  const Formula f = parse_formula("a | b & c", sig);
  EXPECT_TRUE(f.evaluate(Interpretation{0b001}));
  EXPECT_FALSE(f.evaluate(Interpretation{0b010}));
  const Formula g = parse_formula("a -> b <-> c", sig);
  // (a -> b) <-> c
  EXPECT_TRUE(g.evaluate(Interpretation{0b100}));
  EXPECT_FALSE(g.evaluate(Interpretation{0b000}));
  // -> is right-associative: a -> (b -> c)
  const Formula h = parse_formula("a -> b -> c", sig);
  EXPECT_TRUE(h.evaluate(Interpretation{0b000}));
  EXPECT_FALSE(h.evaluate(Interpretation{0b011}));
}

TEST(Parser, CanonicalTextRoundTrips) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto gen = trial % 2 == 0 ? testsupport::random_kb(rng, 4, 5)
                                    : testsupport::random_stratified(rng, 4, 3);
    const auto parsed = parse_kb(gen.text);
    const std::string canon = std::visit([](const auto& k) { return canonical_text(k); }, parsed);
    const auto again = parse_kb(canon);
    const std::string canon2 = std::visit([](const auto& k) { return canonical_text(k); }, again);
    ASSERT_EQ(canon, canon2);
  }
}

TEST(ParserErrors, EmptyFile) {
  const auto e = parse_error("");
  EXPECT_EQ(e.line(), 1U);
  EXPECT_NE(std::string(e.what()).find("atoms"), std::string::npos);
}

TEST(ParserErrors, UndeclaredAtomReportsColumn) {
  const auto e = parse_error("atoms: a b\nrule: a -> zz\n");
  EXPECT_EQ(e.line(), 2U);
  EXPECT_EQ(e.column(), 12U);
}

TEST(ParserErrors, DuplicateAtom) {
  const auto e = parse_error("atoms: a b a\n");
  EXPECT_EQ(e.line(), 1U);
  EXPECT_EQ(e.column(), 12U);
}

TEST(ParserErrors, DuplicateHeader) { EXPECT_EQ(parse_error("atoms: a\natoms: b\n").line(), 2U); }

TEST(ParserErrors, MixedKinds) {
  EXPECT_EQ(parse_error("atoms: a b\nrule: a -> b\nstratum: a\n").line(), 3U);
  EXPECT_EQ(parse_error("atoms: a b\nstratum: a\nformula: b\n").line(), 3U);
}

TEST(ParserErrors, BodyBeforeHeader) { EXPECT_EQ(parse_error("rule: a -> b\n").line(), 1U); }

TEST(ParserErrors, UnknownKeyword) { EXPECT_EQ(parse_error("atoms: a\nfact: a\n").line(), 2U); }

TEST(ParserErrors, ReservedAtomName) { parse_error("atoms: TRUE b\n"); }

TEST(ParserErrors, UnbalancedParenthesis) {
  const auto e = parse_error("atoms: a b\nformula: (a & b\n");
  EXPECT_EQ(e.line(), 2U);
}

TEST(ParserErrors, BadCharacter) {
  const auto e = parse_error("atoms: a b\nformula: a $ b\n");
  EXPECT_EQ(e.line(), 2U);
  EXPECT_EQ(e.column(), 12U);
}

TEST(ParserErrors, TrailingTokens) { parse_error("atoms: a b\nformula: a b\n"); }
