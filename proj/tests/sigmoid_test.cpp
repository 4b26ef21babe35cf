#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "embedsim/errors.hpp"
#include "embedsim/strategies.hpp"

using namespace embedsim;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(dim);
  for (auto& x : v) x = u(rng);
  return v;
}

double dotd(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST(Sigmoid, StableAtExtremes) {
  EXPECT_DOUBLE_EQ(sigmoid(0), 0.5);
  EXPECT_NEAR(sigmoid(800), 1.0, 1e-15);
  EXPECT_GE(sigmoid(-800), 0.0);
  EXPECT_TRUE(std::isfinite(sig_objective({100.0}, {{-100.0}}, 0.5)));
}

TEST(Sigmoid, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t dim = 3;
    std::vector<std::vector<double>> atoms = {random_vector(rng, dim), random_vector(rng, dim),
                                              random_vector(rng, dim)};
    const auto e = random_vector(rng, dim);
    const auto g = sig_gradient(e, atoms, 0.5);
    for (std::size_t i = 0; i < dim; ++i) {
      const double h = 1e-5;
      auto plus = e;
      auto minus = e;
      plus[i] += h;
      minus[i] -= h;
      const double numeric =
          (sig_objective(plus, atoms, 0.5) - sig_objective(minus, atoms, 0.5)) / (2 * h);
      EXPECT_LE(std::abs(numeric - g[i]), 1e-5 * std::max(1.0, std::abs(g[i])));
    }
  }
}

TEST(Sigmoid, SingletonOptimumIsParallelToAttribute) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_vector(rng, 4);
    const auto e = emb_sig_numeric({a}, SigmoidOptions{});
    const double cosine = dotd(e, a) / std::sqrt(dotd(e, e) * dotd(a, a));
    EXPECT_LE(std::acos(std::min(1.0, cosine)), 1e-6);
  }
}

TEST(Sigmoid, PairOptimumSatisfiesStationarity) {
  // At the optimum, 2 kappa e = sum sigma(-e.a_i) a_i: a conical combination.
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<std::vector<double>> atoms = {random_vector(rng, 3), random_vector(rng, 3)};
    const auto e = emb_sig_numeric(atoms, SigmoidOptions{});
    const auto g = sig_gradient(e, atoms, 0.5);
    EXPECT_LE(std::sqrt(dotd(g, g)), 1e-9);
  }
}

TEST(Sigmoid, DeterministicInSeed) {
  const std::vector<std::vector<double>> atoms = {{0.3, -0.2}, {0.1, 0.9}};
  SigmoidOptions opts;
  opts.seed = 42;
  opts.iterations = 5;
  EXPECT_EQ(emb_sig_numeric(atoms, opts), emb_sig_numeric(atoms, opts));
  opts.seed = 43;
  const auto other = emb_sig_numeric(atoms, opts);
  opts.seed = 42;
  EXPECT_NE(emb_sig_numeric(atoms, opts), other);
}

TEST(Sigmoid, RejectsBadInput) {
  EXPECT_THROW(emb_sig_numeric({}, SigmoidOptions{}), ContractViolation);
  SigmoidOptions opts;
  opts.kappa = 0;
  EXPECT_THROW(emb_sig_numeric({{1.0}}, opts), ContractViolation);
}
