#include <gtest/gtest.h>

#include <random>
#include <set>

#include "embedsim/certifier.hpp"
#include "embedsim/errors.hpp"
#include "embedsim/fixtures.hpp"
#include "embedsim/lp.hpp"
#include "embedsim/verifier.hpp"

using namespace embedsim;

namespace {

Constraint row(std::map<std::size_t, Rational> terms, Relation rel, Rational rhs) {
  return Constraint{std::move(terms), rel, std::move(rhs), ""};
}

std::vector<Query> ce1_queries(const Signature& sig) {
  auto q = [&](const char* p, const char* r) {
    return Query{AtomSet::of({sig.index_of(p), sig.index_of(r)}), sig.index_of("x")};
  };
  return {q("a", "b"), q("c", "d"), q("a", "c"), q("b", "d")};
}

}  // namespace

TEST(Simplex, IntervalIsFeasibleAtZero) {
  LinearSystem sys;
  const auto x = sys.add_variable("x");
  sys.add_constraint(row({{x, 1}}, Relation::kGreaterEqual, 0));
  sys.add_constraint(row({{x, 1}}, Relation::kLessEqual, 1));
  const auto out = lp_feasible(sys);
  ASSERT_TRUE(out.feasible());
  EXPECT_EQ(out.witness().values[0], 0);
}

TEST(Simplex, ContradictionGivesFarkas) {
  LinearSystem sys;
  const auto x = sys.add_variable("x");
  sys.add_constraint(row({{x, 1}}, Relation::kGreaterEqual, 2));
  sys.add_constraint(row({{x, 1}}, Relation::kLessEqual, 1));
  const auto out = lp_feasible(sys);
  ASSERT_FALSE(out.feasible());
  EXPECT_EQ(out.farkas().multipliers, (std::vector<Rational>{1, 1}));
  EXPECT_EQ(out.farkas().bound, 1);
  EXPECT_TRUE(verify_farkas(sys, out.farkas()));
}

TEST(Simplex, RejectsUndeclaredVariable) {
  LinearSystem sys;
  sys.add_variable("x");
  EXPECT_THROW(sys.add_constraint(row({{3, 1}}, Relation::kGreaterEqual, 0)), ContractViolation);
}

TEST(Simplex, TamperedCertificatesFailVerification) {
  LinearSystem sys;
  const auto x = sys.add_variable("x");
  sys.add_constraint(row({{x, 1}}, Relation::kGreaterEqual, 2));
  sys.add_constraint(row({{x, 1}}, Relation::kLessEqual, 1));
  EXPECT_FALSE(verify_farkas(sys, FarkasCertificate{{1, 2}, 1}));
  EXPECT_FALSE(verify_farkas(sys, FarkasCertificate{{-1, -1}, -1}));
  EXPECT_FALSE(verify_farkas(sys, FarkasCertificate{{1, 1}, 2}));
  EXPECT_FALSE(satisfies(sys, Witness{{Rational(3, 2)}}));
}

TEST(Simplex, RandomSystemsAreDecidedSoundly) {
  // Every outcome is independently re-checked; both kinds must occur.
  std::mt19937_64 rng(17);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    LinearSystem sys;
    const std::size_t n = 1 + rng() % 4;
    for (std::size_t i = 0; i < n; ++i) sys.add_variable("v" + std::to_string(i));
    const std::size_t m = 1 + rng() % 7;
    for (std::size_t j = 0; j < m; ++j) {
      std::map<std::size_t, Rational> terms;
      for (std::size_t i = 0; i < n; ++i) terms[i] = static_cast<long>(rng() % 7) - 3;
      sys.add_constraint(row(terms, rng() % 2 ? Relation::kGreaterEqual : Relation::kLessEqual,
                             static_cast<long>(rng() % 9) - 4));
    }
    const auto out = lp_feasible(sys);
    if (out.feasible()) {
      ++feasible;
      ASSERT_TRUE(satisfies(sys, out.witness()));
    } else {
      ++infeasible;
      ASSERT_TRUE(verify_farkas(sys, out.farkas()));
    }
  }
  EXPECT_GT(feasible, 20);
  EXPECT_GT(infeasible, 20);
}

TEST(AvgDotSystemTest, Ce1IsInfeasibleWithUniformMultipliers) {
  const auto kb = fixture_kb("CE1");
  const auto rel = ConsequenceRelation::monotonic(kb);
  const auto sys = build_avg_dot_system(rel, ce1_queries(kb.signature));
  ASSERT_EQ(sys.system.constraints().size(), 4U);
  EXPECT_EQ(sys.captured, (std::vector<bool>{true, true, false, false}));
  const auto out = lp_feasible(sys.system);
  ASSERT_FALSE(out.feasible());
  EXPECT_EQ(out.farkas().multipliers, (std::vector<Rational>{1, 1, 1, 1}));
  const auto combined = combine(sys.system, out.farkas().multipliers);
  EXPECT_TRUE(combined.terms.empty());
  EXPECT_EQ(combined.rhs, 4);
  EXPECT_EQ(format_combination(sys.system, combined), "0 >= 4");
}

TEST(AvgDotSystemTest, SingletonQueriesOfSingleRule) {
  const auto kb = std::get<KnowledgeBase>(parse_kb("atoms: a b\nrule: a -> b\n"));
  const auto rel = ConsequenceRelation::monotonic(kb);
  const auto sys = build_avg_dot_system(
      rel, std::vector<Query>{Query{AtomSet::of({0}), 1}, Query{AtomSet::of({1}), 0}});
  const auto& c = sys.system.constraints();
  ASSERT_EQ(c.size(), 2U);
  EXPECT_EQ(format_constraint(sys.system, c[0]), "M[a][b] - lambda[b] >= 0");
  EXPECT_EQ(format_constraint(sys.system, c[1]), "M[b][a] - lambda[a] <= -1");
  EXPECT_TRUE(lp_feasible(sys.system).feasible());
}

TEST(AvgDotSystemTest, FullSystemSize) {
  const auto kb = std::get<KnowledgeBase>(parse_kb("atoms: a b c d\nrule: a -> b\n"));
  const auto sys = build_avg_dot_system(ConsequenceRelation::monotonic(kb), 4);
  EXPECT_EQ(sys.system.constraints().size(), 15U * 4U);
  EXPECT_EQ(sys.system.variable_count(), 16U + 4U);
}

TEST(AvgDotSystemTest, WitnessesStayFeasibleUnderPositiveScaling) {
  // Right-hand sides are 0 or negative, so scaling a witness by t >= 1
  // keeps every row satisfied.
  std::mt19937_64 rng(4);
  for (const char* text : {"atoms: a b c\nrule: a -> b\n", "atoms: a b c\nformula: a -> b & c\n",
                           "atoms: a b c\nformula: a | b\n"}) {
    const auto kb = std::get<KnowledgeBase>(parse_kb(text));
    const auto sys = build_avg_dot_system(ConsequenceRelation::monotonic(kb), 3);
    const auto out = lp_feasible(sys.system);
    ASSERT_TRUE(out.feasible()) << text;
    for (int k = 0; k < 5; ++k) {
      const Rational t(static_cast<long>(1 + rng() % 50), static_cast<long>(1 + rng() % 3));
      if (t < 1) continue;
      Witness scaled = out.witness();
      for (auto& v : scaled.values) v *= t;
      ASSERT_TRUE(satisfies(sys.system, scaled));
    }
  }
}

TEST(Realize, IdentityMatrixCapturesOnlyItself) {
  const Signature sig({"a", "b", "c"});
  std::vector<std::vector<Rational>> m(3, std::vector<Rational>(3, Rational(0)));
  for (int i = 0; i < 3; ++i) m[i][i] = 1;
  const auto e = realize_from_matrix(sig, m, {1, 1, 1});
  const StrategyId s = StrategyId::parse("avg-dot");
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      EXPECT_EQ(captures(e, s, AtomSet::of({a}), b), a == b);
    }
  }
}

TEST(Realize, FeasibleSystemRealizesAndVerifies) {
  const auto kb = std::get<KnowledgeBase>(parse_kb("atoms: a b\nrule: a -> b\n"));
  const auto rel = ConsequenceRelation::monotonic(kb);
  const auto sys = build_avg_dot_system(rel, 2);
  const auto out = lp_feasible(sys.system);
  ASSERT_TRUE(out.feasible());
  const auto e = realize_from_outcome(sys, kb.signature, out);
  EXPECT_EQ(e.dimension(), 2U);
  EXPECT_TRUE(verify_monotonic(e, StrategyId::parse("avg-dot"), kb).simulates());
}

TEST(Realize, InfeasibleOutcomeIsRejected) {
  const auto kb = fixture_kb("CE1");
  const auto sys =
      build_avg_dot_system(ConsequenceRelation::monotonic(kb), ce1_queries(kb.signature));
  EXPECT_THROW(realize_from_outcome(sys, kb.signature, lp_feasible(sys.system)),
               ContractViolation);
}

TEST(DistRelaxation, Ce2IsInfeasibleWithCrossedPairPattern) {
  const auto kb = fixture_kb("CE2");
  const auto& sig = kb.signature;
  const auto rel = ConsequenceRelation::monotonic(kb);
  std::vector<Query> queries;
  for (const char* head : {"x", "y"}) {
    for (auto [p, r] : {std::pair{"a", "b"}, {"c", "d"}, {"a", "c"}, {"b", "d"}}) {
      queries.push_back(Query{AtomSet::of({sig.index_of(p), sig.index_of(r)}), sig.index_of(head)});
    }
  }
  const auto sys = build_avg_dist_relaxation(rel, queries);
  const auto out = lp_feasible(sys.system);
  ASSERT_FALSE(out.feasible());
  // Rows for x alone: 2(G[a][c] + G[b][d] - G[a][b] - G[c][d]) >= 8, i.e.
  // a.b + c.d < a.c + b.d.
  std::vector<Rational> x_only = out.farkas().multipliers;
  for (std::size_t k = 0; k < queries.size(); ++k) {
    if (queries[k].head != sig.index_of("x")) x_only[k] = 0;
  }
  const auto part = combine(sys.system, x_only);
  const std::size_t a = 0, b = 1, c = 2, d = 3;
  ASSERT_EQ(part.terms.size(), 4U);
  const Rational k = part.terms.at(sys.gram_var(a, c));
  EXPECT_GT(k, 0);
  EXPECT_EQ(part.terms.at(sys.gram_var(b, d)), k);
  EXPECT_EQ(part.terms.at(sys.gram_var(a, b)), -k);
  EXPECT_EQ(part.terms.at(sys.gram_var(c, d)), -k);
  EXPECT_GT(part.rhs, 0);
}

TEST(DistRelaxation, Ce1IsFeasible) {
  const auto kb = fixture_kb("CE1");
  const auto sys =
      build_avg_dist_relaxation(ConsequenceRelation::monotonic(kb), ce1_queries(kb.signature));
  EXPECT_TRUE(lp_feasible(sys.system).feasible());
}

TEST(DistRelaxation, SingleRuleSingletonFeasible) {
  const auto kb = std::get<KnowledgeBase>(parse_kb("atoms: a x\nrule: a -> x\n"));
  const auto sys = build_avg_dist_relaxation(ConsequenceRelation::monotonic(kb),
                                             std::vector<Query>{Query{AtomSet::of({0}), 1}});
  EXPECT_TRUE(lp_feasible(sys.system).feasible());
}

TEST(DistRelaxation, VariableIndicesAreDistinct) {
  AvgDistRelaxation r;
  r.atoms = 4;
  std::set<std::size_t> seen;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t a2 = a; a2 < 4; ++a2) seen.insert(r.gram_var(a, a2));
    for (std::size_t b = 0; b < 4; ++b) seen.insert(r.cross_var(a, b));
    seen.insert(r.norm_var(a));
    seen.insert(r.radius_var(a));
  }
  EXPECT_EQ(seen.size(), 10U + 16U + 4U + 4U);
  EXPECT_EQ(*seen.rbegin(), 33U);
  EXPECT_EQ(r.gram_var(2, 1), r.gram_var(1, 2));
}
