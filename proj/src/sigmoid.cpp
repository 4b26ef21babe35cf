#include <cmath>
#include <random>

#include "embedsim/errors.hpp"
#include "embedsim/strategies.hpp"

namespace embedsim {
namespace {

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return sum;
}

// log(sigma(x)) without overflow for large |x|.
double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

void check_dimensions(const std::vector<double>& e, const std::vector<std::vector<double>>& atoms) {
  for (const auto& a : atoms) {
    if (a.size() != e.size()) throw DimensionMismatch("sigmoid pooling dimension mismatch");
  }
}

}  // namespace

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double z = std::exp(x);
  return z / (1.0 + z);
}

double sig_objective(const std::vector<double>& e, const std::vector<std::vector<double>>& atoms,
                     double kappa) {
  check_dimensions(e, atoms);
  double value = -kappa * dot(e, e);
  for (const auto& a : atoms) value += log_sigmoid(dot(e, a));
  return value;
}

std::vector<double> sig_gradient(const std::vector<double>& e,
                                 const std::vector<std::vector<double>>& atoms, double kappa) {
  check_dimensions(e, atoms);
  std::vector<double> g(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) g[i] = -2.0 * kappa * e[i];
  // d/de log sigma(e.a) = sigma(-e.a) a
  for (const auto& a : atoms) {
    const double w = sigmoid(-dot(e, a));
    for (std::size_t i = 0; i < e.size(); ++i) g[i] += w * a[i];
  }
  return g;
}

std::vector<double> emb_sig_numeric(const std::vector<std::vector<double>>& atoms,
                                    const SigmoidOptions& options) {
  if (atoms.empty()) throw ContractViolation("sigmoid pooling needs a nonempty antecedent");
  if (!(options.kappa > 0)) throw ContractViolation("kappa must be positive");
  const std::size_t m = atoms.front().size();

  // The objective is concave with a gradient that is Lipschitz with constant
  // sum |a_i|^2 / 4 + 2 kappa, so a fixed step of 1/L ascends monotonically.
  double lipschitz = 2.0 * options.kappa;
  for (const auto& a : atoms) lipschitz += dot(a, a) / 4.0;
  const double step = 1.0 / lipschitz;

  std::mt19937_64 rng(options.seed);
  std::vector<double> e(m);
  for (auto& x : e) {
    // Uniform in [-0.1, 0.1), built from raw engine bits so it does not
    // depend on the standard library's distribution implementation.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    x = 0.2 * u - 0.1;
  }

  for (std::size_t it = 0; it < options.iterations; ++it) {
    const auto g = sig_gradient(e, atoms, options.kappa);
    double g_norm = 0;
    for (std::size_t i = 0; i < m; ++i) {
      e[i] += step * g[i];
      g_norm += g[i] * g[i];
    }
    if (g_norm < 1e-30) break;
  }
  if (!std::isfinite(sig_objective(e, atoms, options.kappa))) {
    throw Error("sigmoid pooling produced a non-finite objective");
  }
  return e;
}

std::vector<double> to_doubles(const Vector& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.get_d());
  return out;
}

std::vector<double> emb_sig_numeric(const AttributeEmbedding& e, AtomSet s,
                                    const SigmoidOptions& options) {
  std::vector<std::vector<double>> atoms;
  for (std::size_t a : s.atoms()) atoms.push_back(to_doubles(e.context(a)));
  return emb_sig_numeric(atoms, options);
}

}  // namespace embedsim
