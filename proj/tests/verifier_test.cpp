#include <gtest/gtest.h>

#include <random>

#include "embedsim/constructors.hpp"
#include "embedsim/errors.hpp"
#include "embedsim/fixtures.hpp"
#include "embedsim/verifier.hpp"

using namespace embedsim;

namespace {

AttributeEmbedding random_embedding(std::mt19937_64& rng, const Signature& sig, std::size_t dim,
                                    bool thresholds = true) {
  std::vector<AttributeVectors> atoms;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    AttributeVectors a;
    a.name = sig.name(i);
    for (std::size_t k = 0; k < dim; ++k) {
      a.context.emplace_back(static_cast<long>(rng() % 7) - 3);
      a.output.emplace_back(static_cast<long>(rng() % 7) - 3);
    }
    if (thresholds) {
      a.lambda = static_cast<long>(rng() % 5) - 2;
      a.theta = static_cast<long>(rng() % 3);
    }
    atoms.push_back(std::move(a));
  }
  return AttributeEmbedding(dim, std::move(atoms));
}

std::vector<Query> ce1_queries(const Signature& sig) {
  const std::size_t a = sig.index_of("a"), b = sig.index_of("b"), c = sig.index_of("c"),
                    d = sig.index_of("d"), x = sig.index_of("x");
  return {{AtomSet::of({a, b}), x}, {AtomSet::of({c, d}), x}, {AtomSet::of({a, c}), x},
          {AtomSet::of({b, d}), x}};
}

}  // namespace

TEST(Verifier, DefaultCap) {
  EXPECT_EQ(default_subset_cap(5), 5U);
  EXPECT_EQ(default_subset_cap(8), 8U);
  EXPECT_EQ(default_subset_cap(9), 4U);
}

TEST(Verifier, RandomAvgDotFailsOnCe1Queries) {
  const auto kb = fixture_kb("CE1");
  std::mt19937_64 rng(5);
  VerificationOptions opts;
  opts.queries = ce1_queries(kb.signature);
  for (int trial = 0; trial < 50; ++trial) {
    const auto e = random_embedding(rng, kb.signature, 3);
    const auto r = verify_monotonic(e, StrategyId::parse("avg-dot"), kb, opts);
    EXPECT_EQ(r.queries_checked, 4U);
    EXPECT_FALSE(r.simulates());
  }
}

TEST(Verifier, DistanceWitnessPassesCe1Queries) {
  // avg{a,b} = avg{c,d} = 0 lies within 1/2 of x~ = 0; avg{a,c} = (-1/2,-1/2)
  // and avg{b,d} = (1/2,1/2) are at distance sqrt(1/2) > 1/2.
  const auto kb = fixture_kb("CE1");
  const auto& sig = kb.signature;
  std::vector<AttributeVectors> atoms;
  const std::vector<std::pair<long, long>> pts = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}, {5, 5}};
  for (std::size_t i = 0; i < sig.size(); ++i) {
    AttributeVectors a;
    a.name = sig.name(i);
    a.context = {Rational(pts[i].first), Rational(pts[i].second)};
    a.output = sig.name(i) == "x" ? Vector{Rational(0), Rational(0)} : a.context;
    a.theta = Rational(1, 2);
    atoms.push_back(std::move(a));
  }
  const AttributeEmbedding e(2, std::move(atoms));
  VerificationOptions opts;
  opts.queries = ce1_queries(sig);
  const auto r = verify_monotonic(e, StrategyId::parse("avg-dist"), kb, opts);
  EXPECT_TRUE(r.simulates());
  EXPECT_EQ(r.queries_checked, 4U);
}

TEST(Verifier, MismatchesComeInCanonicalOrderAndCarryScores) {
  const auto kb = fixture_kb("CE1");
  std::mt19937_64 rng(6);
  const auto e = random_embedding(rng, kb.signature, 2);
  const auto r = verify_monotonic(e, StrategyId::parse("avg-dot"), kb);
  ASSERT_FALSE(r.simulates());
  for (std::size_t i = 1; i < r.mismatches.size(); ++i) {
    EXPECT_TRUE(canonical_less(r.mismatches[i - 1].query, r.mismatches[i].query));
  }
  for (const auto& m : r.mismatches) {
    EXPECT_NE(m.expected, m.got);
    EXPECT_FALSE(m.score.empty());
  }
}

TEST(Verifier, ParallelSweepMatchesSerial) {
  const auto kb = fixture_kb("CE2");
  std::mt19937_64 rng(7);
  const auto e = random_embedding(rng, kb.signature, 3);
  VerificationOptions serial;
  VerificationOptions parallel;
  parallel.threads = 4;
  for (const char* s : {"avg-dot", "avg-dist", "norm-dot", "norm-dist", "avg-relu", "had-dot",
                        "ord-ord"}) {
    const auto strategy = StrategyId::parse(s);
    const auto a = to_json(verify_monotonic(e, strategy, kb, serial)).dump();
    const auto b = to_json(verify_monotonic(e, strategy, kb, parallel)).dump();
    EXPECT_EQ(a, b) << s;
    EXPECT_EQ(a, to_json(verify_monotonic(e, strategy, kb, serial)).dump());
  }
}

TEST(Verifier, SubsetCapAnnotation) {
  const auto kb = fixture_kb("CE1");
  const auto c = construct_ord(kb);
  VerificationOptions opts;
  opts.subset_cap = 2;
  const auto r = verify_monotonic(c.embedding, c.strategy, kb, opts);
  EXPECT_TRUE(r.simulates());
  EXPECT_EQ(r.queries_checked, (5U + 10U) * 5U);
  bool annotated = false;
  for (const auto& a : r.annotations) annotated = annotated || a.find("subset cap") == 0;
  EXPECT_TRUE(annotated);
}

TEST(Verifier, RejectsMismatchedSignatureAndNumericStrategies) {
  const auto kb = fixture_kb("CE1");
  const auto other = construct_ord(fixture_kb("MPF"));
  EXPECT_THROW(verify_monotonic(other.embedding, other.strategy, kb), DimensionMismatch);
  const auto c = construct_ord(kb);
  EXPECT_THROW(verify_monotonic(c.embedding, StrategyId::parse("sig-dot"), kb),
               ContractViolation);
}

TEST(Verifier, KbHashIsStableAndDistinguishesKbs) {
  const auto a = kb_hash(fixture_kb("CE1"));
  EXPECT_EQ(a.size(), 16U);
  EXPECT_EQ(a, kb_hash(std::get<KnowledgeBase>(
                   parse_kb("atoms:  a b c d x\nrule: (a & b) -> x\nrule: c & d -> x\n"))));
  EXPECT_NE(a, kb_hash(fixture_kb("CE2")));
  EXPECT_NE(kb_hash(fixture_theta("EX4")), kb_hash(fixture_theta("ORD-NM")));
}

TEST(Properties, OrdMonotonicityOnRandomEmbeddings) {
  std::mt19937_64 rng(11);
  const auto theta = fixture_theta("ORD-NM");
  for (int trial = 0; trial < 30; ++trial) {
    const auto e = random_embedding(rng, theta.signature, 3, false);
    const auto p = check_ord_monotonicity(e);
    EXPECT_TRUE(p.holds);
    EXPECT_GT(p.checks, 0U);
  }
}

TEST(Properties, OrdMonotonicityReportsTrace) {
  const auto c = construct_ord(fixture_kb("MPF"));
  const auto p = check_ord_monotonicity(c.embedding);
  EXPECT_TRUE(p.holds);
  EXPECT_FALSE(p.trace.empty());
  EXPECT_FALSE(p.counterexample.has_value());
}

TEST(Properties, TiedHadamardSymmetry) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto e = random_embedding(rng, fixture_kb("CE1").signature, 3, false);
    EXPECT_TRUE(check_tied_hadamard_symmetry(e).holds);
  }
  std::vector<AttributeVectors> atoms(1);
  atoms[0].name = "a";
  atoms[0].context = {Rational(1)};
  atoms[0].output = atoms[0].context;
  atoms[0].lambda = 1;
  EXPECT_THROW(check_tied_hadamard_symmetry(AttributeEmbedding(1, atoms)), ContractViolation);
}

TEST(Verifier, NonMonotonicSweepOnConstructions) {
  const auto theta = fixture_theta("EX4");
  const auto c = construct_had_dot_nm(theta);
  const auto r = verify_nonmonotonic(c.embedding, c.strategy, theta);
  EXPECT_TRUE(r.simulates());
  EXPECT_EQ(r.relation, RelationKind::kNonMonotonic);
  EXPECT_EQ(r.queries_checked, 31U * 5U);
  const auto j = to_json(r);
  EXPECT_EQ(j["verdict"], "simulates");
  EXPECT_FALSE(j.contains("elapsed_ms"));
}
