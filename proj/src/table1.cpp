#include "embedsim/table1.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <thread>

#include "embedsim/constructors.hpp"
#include "embedsim/errors.hpp"
#include "embedsim/fixtures.hpp"
#include "embedsim/verifier.hpp"

namespace embedsim {
namespace {

using nlohmann::ordered_json;

const std::vector<std::string>& monotonic_construction_fixtures() {
  static const std::vector<std::string> names = {"CE1", "CE2", "CE3", "CE4", "MPF", "HAD-SYM"};
  return names;
}

// Stratified fixtures plus single-stratum lifts of monotonic ones.
const std::vector<std::string>& ranked_construction_fixtures() {
  static const std::vector<std::string> names = {"EX4", "ORD-NM", "CE1", "MPF", "HAD-SYM"};
  return names;
}

struct FailureFixture {
  const char* monotonic;
  const char* nonmonotonic;
};

// Fixture behind each unsupported cell, nullptr where the cell is supported.
FailureFixture failure_fixture(const StrategyId& s) {
  switch (s.pooling) {
    case Pooling::kAvg:
      if (s.labelling == Labelling::kDot) return {"CE1", "CE1"};
      if (s.labelling == Labelling::kDist) return {"CE2", "CE2"};
      return {nullptr, nullptr};
    case Pooling::kNorm:
      return {"CE3", "CE3"};
    case Pooling::kSig:
      return {"CE4", "CE4"};
    case Pooling::kHad:
      if (s.tied_vectors) return {"HAD-SYM", "HAD-SYM"};
      return {nullptr, nullptr};
    case Pooling::kOrd:
      return {nullptr, "ORD-NM"};
  }
  return {nullptr, nullptr};
}

std::string cell_name(const StrategyId& s, RelationKind kind) {
  return s.name() + "/" + to_string(kind);
}

std::optional<DeltaConfig> delta_for(const Table1Options& options, std::size_t atoms) {
  if (!options.delta) return std::nullopt;
  return DeltaConfig::checked(*options.delta, atoms);
}

ConstructionResult construct_for(const StrategyId& s, RelationKind kind, const std::string& name,
                                 const Table1Options& options) {
  auto parsed = parse_fixture(fixture(name));
  if (kind == RelationKind::kMonotonic) {
    const auto& kb = std::get<KnowledgeBase>(parsed);
    const auto delta = delta_for(options, kb.signature.size());
    if (s.pooling == Pooling::kAvg) return construct_avg_relu(kb, delta);
    if (s.pooling == Pooling::kHad) return construct_had_dot(kb, delta);
    return construct_ord(kb);
  }
  StratifiedKB theta = std::holds_alternative<StratifiedKB>(parsed)
                           ? std::get<StratifiedKB>(parsed)
                           : single_stratum(std::get<KnowledgeBase>(parsed));
  const auto delta = delta_for(options, theta.signature.size());
  if (s.pooling == Pooling::kAvg) return construct_avg_relu_nm(theta, delta);
  return construct_had_dot_nm(theta, delta);
}

Table1Cell construction_cell(const StrategyId& s, RelationKind kind,
                             const Table1Options& options) {
  const auto& names = kind == RelationKind::kMonotonic ? monotonic_construction_fixtures()
                                                       : ranked_construction_fixtures();
  Table1Cell cell;
  cell.supported = true;
  cell.evidence_kind = "construction";
  auto runs = ordered_json::array();
  std::size_t queries = 0;
  int proposition = 0;
  for (const auto& name : names) {
    const ConstructionResult built = construct_for(s, kind, name, options);
    proposition = static_cast<int>(built.construction);
    VerificationOptions vopts;
    vopts.subset_cap = options.subset_cap;
    auto parsed = parse_fixture(fixture(name));
    VerificationReport report;
    if (kind == RelationKind::kMonotonic) {
      report = verify_monotonic(built.embedding, s, std::get<KnowledgeBase>(parsed), vopts);
    } else {
      StratifiedKB theta = std::holds_alternative<StratifiedKB>(parsed)
                               ? std::get<StratifiedKB>(parsed)
                               : single_stratum(std::get<KnowledgeBase>(parsed));
      report = verify_nonmonotonic(built.embedding, s, theta, vopts);
    }
    if (!report.simulates()) {
      throw Error("table1 cell " + cell_name(s, kind) + ": construction " +
                  std::to_string(proposition) + " on " + name + " has " +
                  std::to_string(report.mismatches.size()) + " mismatches");
    }
    queries += report.queries_checked;
    ordered_json run;
    run["fixture"] = name;
    run["dimension"] = built.embedding.dimension();
    run["delta"] = built.delta ? ordered_json(built.delta->get_str()) : ordered_json(nullptr);
    run["subset_cap"] = report.subset_cap;
    run["queries_checked"] = report.queries_checked;
    run["mismatches"] = report.mismatches.size();
    runs.push_back(std::move(run));
  }
  cell.reverified = true;
  cell.summary = "construction " + std::to_string(proposition) + " on " +
                 std::to_string(names.size()) + " KBs, 0 mismatches in " +
                 std::to_string(queries) + " queries";
  cell.detail["proposition"] = proposition;
  cell.detail["runs"] = std::move(runs);
  return cell;
}

Table1Cell certificate_cell(const StrategyId& s, RelationKind kind, const std::string& name) {
  const Certificate cert = certify_strategy_failure(s, fixture(name), kind);
  if (cert.verdict != Verdict::kNotSimulable) {
    throw Error("table1 cell " + cell_name(s, kind) + ": certificate on " + name + " is " +
                to_string(cert.verdict));
  }
  if (!cert.reverified) {
    throw Error("table1 cell " + cell_name(s, kind) + ": certificate on " + name +
                " failed re-verification");
  }
  Table1Cell cell;
  cell.supported = false;
  cell.evidence_kind = cert.evidence_kind;
  cell.reverified = true;
  cell.summary = name + ", " + cert.evidence.value("type", std::string("certificate")) + ", " +
                 cert.evidence_kind;
  cell.detail = to_json(cert);
  return cell;
}

std::string fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  // Avoid "-0.000000".
  return std::string(buf) == "-0.000000" ? "0.000000" : buf;
}

double dotd(const std::vector<double>& u, const std::vector<double>& v) {
  double s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

// Sigmoid optimizer outputs for random base vectors: singletons should point
// along their vector, pairs should lie in the cone of their two vectors.
ordered_json sigmoid_diagnostics(const Table1Options& options) {
  constexpr std::size_t kDim = 4;
  const std::vector<std::string> names = {"a", "b", "c", "d"};
  std::mt19937_64 rng(options.seed);
  std::vector<std::vector<double>> base;
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::vector<double> v(kDim);
    for (auto& x : v) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    base.push_back(std::move(v));
  }
  SigmoidOptions sopts;
  sopts.seed = options.seed;

  ordered_json j;
  j["authoritative"] = false;
  j["seed"] = options.seed;
  j["kappa"] = fixed(sopts.kappa);
  auto singles = ordered_json::array();
  for (std::size_t i = 0; i < base.size(); ++i) {
    const auto e = emb_sig_numeric({base[i]}, sopts);
    const double cosine = dotd(e, base[i]) / std::sqrt(dotd(e, e) * dotd(base[i], base[i]));
    singles.push_back(ordered_json{{"antecedent", names[i]}, {"cosine", fixed(cosine)}});
  }
  j["singletons"] = std::move(singles);

  auto pairs = ordered_json::array();
  bool all_in_cone = true;
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t k = i + 1; k < base.size(); ++k) {
      const auto& p = base[i];
      const auto& q = base[k];
      const auto e = emb_sig_numeric({p, q}, sopts);
      // Least squares e ~ alpha p + beta q.
      const double pp = dotd(p, p), pq = dotd(p, q), qq = dotd(q, q);
      const double ep = dotd(e, p), eq = dotd(e, q);
      const double det = pp * qq - pq * pq;
      const double alpha = (ep * qq - eq * pq) / det;
      const double beta = (eq * pp - ep * pq) / det;
      double residual = 0;
      for (std::size_t t = 0; t < kDim; ++t) {
        const double r = e[t] - alpha * p[t] - beta * q[t];
        residual += r * r;
      }
      residual = std::sqrt(residual);
      const bool in_cone = alpha >= 0 && beta >= 0 && residual <= 1e-6;
      all_in_cone = all_in_cone && in_cone;
      pairs.push_back(ordered_json{{"antecedent", names[i] + names[k]},
                                   {"alpha", fixed(alpha)},
                                   {"beta", fixed(beta)},
                                   {"residual_below_1e-6", residual <= 1e-6},
                                   {"in_cone", in_cone}});
    }
  }
  j["pairs"] = std::move(pairs);
  j["all_pairs_in_cone"] = all_in_cone;
  return j;
}

void run_parallel(std::vector<std::function<void()>>& tasks, unsigned threads) {
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(tasks.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

ordered_json cell_json(const Table1Cell& cell) {
  ordered_json j;
  j["verdict"] = cell.supported ? "supported" : "unsupported";
  j["evidence_kind"] = cell.evidence_kind;
  j["summary"] = cell.summary;
  j["reverified"] = cell.reverified;
  j["detail"] = cell.detail;
  return j;
}

}  // namespace

Table1Report run_table1(const Table1Options& options) {
  Table1Report report;
  for (const auto& s : table1_strategies()) report.rows.push_back(Table1Row{s, {}, {}, {}});

  std::vector<std::function<void()>> tasks;
  for (auto& row : report.rows) {
    const FailureFixture failing = failure_fixture(row.strategy);
    for (RelationKind kind : {RelationKind::kMonotonic, RelationKind::kNonMonotonic}) {
      Table1Cell* slot = kind == RelationKind::kMonotonic ? &row.monotonic : &row.nonmonotonic;
      const char* name =
          kind == RelationKind::kMonotonic ? failing.monotonic : failing.nonmonotonic;
      const StrategyId s = row.strategy;
      if (name) {
        tasks.emplace_back([slot, s, kind, name] { *slot = certificate_cell(s, kind, name); });
      } else {
        tasks.emplace_back(
            [slot, s, kind, &options] { *slot = construction_cell(s, kind, options); });
      }
    }
    if (row.strategy.pooling == Pooling::kSig) {
      auto* diag = &row.numeric_diagnostics;
      tasks.emplace_back([diag, &options] { *diag = sigmoid_diagnostics(options); });
    }
  }
  run_parallel(tasks, options.threads);
  return report;
}

ordered_json to_json(const Table1Report& report) {
  ordered_json j;
  auto rows = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r;
    r["strategy"] = row.strategy.name();
    r["monotonic"] = cell_json(row.monotonic);
    r["nonmonotonic"] = cell_json(row.nonmonotonic);
    if (row.numeric_diagnostics) r["numeric_diagnostics"] = *row.numeric_diagnostics;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string to_markdown(const Table1Report& report) {
  auto mark = [](const Table1Cell& c) { return std::string(c.supported ? "✓" : "✗"); };
  std::string out =
      "| Strategy | Monotonic | Non-monotonic | Evidence (monotonic) | Evidence (non-monotonic) |\n"
      "|---|---|---|---|---|\n";
  for (const auto& row : report.rows) {
    out += "| " + row.strategy.name() + " | " + mark(row.monotonic) + " | " +
           mark(row.nonmonotonic) + " | " + row.monotonic.summary + " | " +
           row.nonmonotonic.summary + " |\n";
  }
  return out;
}

}  // namespace embedsim
