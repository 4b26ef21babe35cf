#include "embedsim/certifier.hpp"

#include <algorithm>

#include "embedsim/errors.hpp"
#include "embedsim/verifier.hpp"

namespace embedsim {
namespace {

using nlohmann::ordered_json;

std::vector<std::string> names_of(const Signature& sig, AtomSet s) {
  std::vector<std::string> out;
  for (std::size_t a : s.atoms()) out.push_back(sig.name(a));
  return out;
}

std::string query_text(const Signature& sig, const Query& q) {
  std::string out;
  for (const auto& name : names_of(sig, q.antecedent)) {
    out += (out.empty() ? "" : " & ") + name;
  }
  return out + " -> " + sig.name(q.head);
}

std::vector<Query> capped_queries(const Signature& sig, std::size_t subset_cap) {
  return all_queries(sig.size(), std::min(subset_cap, sig.size()));
}

void check_queries(const Signature& sig, const std::vector<Query>& queries) {
  for (const auto& q : queries) {
    if (q.antecedent.empty() || (q.antecedent.bits & ~sig.full_mask()) != 0 ||
        q.head >= sig.size()) {
      throw ContractViolation("query outside the signature or with empty antecedent");
    }
  }
}

ordered_json farkas_json(const LinearSystem& system, const FarkasCertificate& cert) {
  ordered_json j;
  j["type"] = "farkas";
  auto rows = ordered_json::array();
  auto multipliers = ordered_json::array();
  for (std::size_t k = 0; k < cert.multipliers.size(); ++k) {
    multipliers.push_back(format_rational(cert.multipliers[k]));
    if (cert.multipliers[k] == 0) continue;
    const Constraint& c = system.constraints()[k];
    ordered_json row;
    row["constraint"] = c.label;
    row["multiplier"] = format_rational(cert.multipliers[k]);
    row["inequality"] = format_constraint(system, c);
    rows.push_back(std::move(row));
  }
  j["multipliers"] = std::move(multipliers);
  j["rows"] = std::move(rows);
  j["combination"] = format_combination(system, combine(system, cert.multipliers));
  j["bound"] = format_rational(cert.bound);
  return j;
}

// Partial combinations restricted to the rows of one head: for CE2 each head
// contributes one side of the crossed-pair contradiction.
ordered_json partial_combinations(const LinearSystem& system, const std::vector<Query>& queries,
                                  const Signature& sig, const FarkasCertificate& cert) {
  ordered_json j = ordered_json::object();
  for (std::size_t head = 0; head < sig.size(); ++head) {
    std::vector<Rational> restricted(cert.multipliers.size(), Rational(0));
    bool any = false;
    for (std::size_t k = 0; k < queries.size(); ++k) {
      if (queries[k].head == head && cert.multipliers[k] != 0) {
        restricted[k] = cert.multipliers[k];
        any = true;
      }
    }
    if (any) j[sig.name(head)] = format_combination(system, combine(system, restricted));
  }
  return j;
}

Certificate base_certificate(const StrategyId& strategy, std::string fixture,
                             RelationKind relation) {
  Certificate c;
  c.strategy = strategy;
  c.fixture = std::move(fixture);
  c.relation = relation;
  return c;
}

// Queries bundled with each fixture for the LP engines.
std::vector<Query> fixture_queries(const std::string& name, const Signature& sig) {
  auto q = [&](std::initializer_list<const char*> body, const char* head) {
    AtomSet s;
    for (const char* atom : body) s = s.with(sig.index_of(atom));
    return Query{s, sig.index_of(head)};
  };
  if (name == "CE1") {
    return {q({"a", "b"}, "x"), q({"c", "d"}, "x"), q({"a", "c"}, "x"), q({"b", "d"}, "x")};
  }
  if (name == "CE2") {
    return {q({"a", "b"}, "x"), q({"c", "d"}, "x"), q({"a", "c"}, "x"), q({"b", "d"}, "x"),
            q({"a", "c"}, "y"), q({"b", "d"}, "y"), q({"a", "b"}, "y"), q({"c", "d"}, "y")};
  }
  if (name == "CE3" || name == "CE4") {
    std::vector<Query> out;
    for (const char* head : {"x", "y"}) {
      for (auto [p, r] : {std::pair{"a", "b"}, {"c", "d"}, {"a", "c"}, {"b", "d"}, {"a", "d"},
                          {"b", "c"}}) {
        out.push_back(q({p, r}, head));
      }
    }
    return out;
  }
  if (sig.size() > kGenericAvgDotCap) {
    throw CapExceeded("fixture '" + name + "' has no bundled query set and more than " +
                      std::to_string(kGenericAvgDotCap) + " atoms");
  }
  return capped_queries(sig, sig.size());
}

struct Oracle {
  ConsequenceRelation relation;
  std::string hash;
  // Independent re-check of a single answer.
  std::function<bool(AtomSet, std::size_t)> direct;
};

Oracle fixture_oracle(const Fixture& f, RelationKind kind) {
  auto parsed = parse_fixture(f);
  if (auto* kb = std::get_if<KnowledgeBase>(&parsed)) {
    if (kind == RelationKind::kMonotonic) {
      return Oracle{ConsequenceRelation::monotonic(*kb), kb_hash(*kb),
                    [kb = *kb](AtomSet s, std::size_t b) { return entails(kb, s, b); }};
    }
    StratifiedKB lifted = single_stratum(*kb);
    return Oracle{ConsequenceRelation::ranked(lifted), kb_hash(lifted),
                  [lifted](AtomSet s, std::size_t b) { return nm_consequence_def(lifted, s, b); }};
  }
  const auto& theta = std::get<StratifiedKB>(parsed);
  if (kind == RelationKind::kMonotonic) {
    throw ContractViolation("fixture '" + f.name + "' is stratified; use the non-monotonic relation");
  }
  return Oracle{ConsequenceRelation::ranked(theta), kb_hash(theta),
                [theta](AtomSet s, std::size_t b) { return nm_consequence_def(theta, s, b); }};
}

Certificate certify_with_avg_dot(Certificate cert, const ConsequenceRelation& relation,
                                 const std::string& hash, const std::vector<Query>& queries) {
  const Signature& sig = relation.signature();
  const AvgDotSystem sys = build_avg_dot_system(relation, queries);
  const FeasibilityOutcome outcome = lp_feasible(sys.system);
  cert.evidence_kind = "decided";
  if (outcome.feasible()) {
    AttributeEmbedding embedding = realize_from_outcome(sys, sig, outcome);
    VerificationOptions options;
    options.queries = sys.queries;
    const VerificationReport report =
        verify_relation(embedding, StrategyId{Pooling::kAvg, Labelling::kDot, false}, relation,
                        hash, options);
    cert.verdict = Verdict::kSimulable;
    cert.reverified = satisfies(sys.system, outcome.witness()) && report.simulates();
    ordered_json ev;
    ev["type"] = "witness";
    ev["constraints"] = sys.system.constraints().size();
    ev["embedding"] = to_json(embedding);
    ev["verification"] = to_json(report);
    cert.evidence = std::move(ev);
  } else {
    cert.verdict = Verdict::kNotSimulable;
    cert.reverified = verify_farkas(sys.system, outcome.farkas());
    cert.evidence = farkas_json(sys.system, outcome.farkas());
    cert.evidence["constraints"] = sys.system.constraints().size();
  }
  return cert;
}

Certificate certify_with_dist_relaxation(Certificate cert, const ConsequenceRelation& relation,
                                         const std::vector<Query>& queries) {
  const AvgDistRelaxation sys = build_avg_dist_relaxation(relation, queries);
  const FeasibilityOutcome outcome = lp_feasible(sys.system);
  cert.assumptions.push_back(
      "relaxation drops positive semidefiniteness of the Gram matrix; only infeasibility is "
      "conclusive");
  if (outcome.feasible()) {
    cert.verdict = Verdict::kInconclusive;
    cert.evidence_kind = "decided";
    cert.reverified = satisfies(sys.system, outcome.witness());
    ordered_json ev;
    ev["type"] = "relaxation_feasible";
    ev["constraints"] = sys.system.constraints().size();
    cert.evidence = std::move(ev);
    return cert;
  }
  cert.verdict = Verdict::kNotSimulable;
  cert.evidence_kind = "decided";
  cert.reverified = verify_farkas(sys.system, outcome.farkas());
  cert.evidence = farkas_json(sys.system, outcome.farkas());
  cert.evidence["constraints"] = sys.system.constraints().size();
  cert.evidence["per_head"] =
      partial_combinations(sys.system, sys.queries, relation.signature(), outcome.farkas());
  return cert;
}

ordered_json closure_json(const ConicalRequirement& req, const ConicalOutcome& outcome) {
  ordered_json j;
  j["type"] = "closure_trace";
  j["base_points"] = req.base_points;
  auto pairs = ordered_json::array();
  for (const auto& p : req.pairs) {
    pairs.push_back(req.base_points[p.first] + req.base_points[p.second] + " strictly " +
                    to_string(p.side));
  }
  j["requirements"] = std::move(pairs);
  j["cases_examined"] = outcome.cases_examined;
  j["surviving"] = outcome.consistent ? 1 : 0;
  auto trace = ordered_json::array();
  for (const auto& c : outcome.trace) {
    ordered_json entry;
    std::vector<std::string> placement;
    for (std::size_t i = 0; i < c.placement.size(); ++i) {
      placement.push_back(req.base_points[i] + ":" + to_string(c.placement[i]));
    }
    entry["placement"] = placement;
    const auto& p = req.pairs[c.violated_requirement];
    entry["violates"] = req.base_points[p.first] + req.base_points[p.second] + " strictly " +
                        to_string(p.side);
    trace.push_back(std::move(entry));
  }
  j["trace"] = std::move(trace);
  if (outcome.consistent) {
    std::vector<std::string> assignment;
    for (std::size_t i = 0; i < outcome.assignment.size(); ++i) {
      assignment.push_back(req.base_points[i] + ":" + to_string(outcome.assignment[i]));
    }
    j["assignment"] = assignment;
  }
  return j;
}

// z atom with p -> z and q -> z entailed but not TRUE -> z: the pooled pair
// must capture z while the empty antecedent does not, ruling out p = -q.
std::optional<std::size_t> shared_consequence(const ConsequenceRelation& relation, std::size_t p,
                                              std::size_t q, AtomSet exclude) {
  const Signature& sig = relation.signature();
  const std::uint64_t common = relation.consequences(AtomSet::of({p})) &
                               relation.consequences(AtomSet::of({q})) &
                               ~relation.consequences(AtomSet{}) & ~exclude.bits;
  for (std::size_t z = 0; z < sig.size(); ++z) {
    if ((common >> z) & 1U) return z;
  }
  return std::nullopt;
}

Certificate certify_conical(Certificate cert, const ConsequenceRelation& relation) {
  const Signature& sig = relation.signature();
  for (const char* needed : {"a", "b", "c", "d", "x", "y"}) {
    if (!sig.find(needed)) {
      throw ContractViolation("conical certificate needs atoms a b c d x y");
    }
  }
  const std::vector<std::size_t> base = {sig.index_of("a"), sig.index_of("b"), sig.index_of("c"),
                                         sig.index_of("d")};
  const std::size_t x = sig.index_of("x");
  const std::size_t y = sig.index_of("y");
  const bool sig_pooling = cert.strategy.pooling == Pooling::kSig;
  const bool dist = cert.strategy.labelling == Labelling::kDist;

  cert.evidence_kind = "certified-under-lemma";
  ordered_json side;
  const bool empty_rejects = !relation.holds(AtomSet{}, x) && !relation.holds(AtomSet{}, y);
  side["empty_antecedent_rejects_heads"] = empty_rejects;

  if (sig_pooling) {
    cert.assumptions.push_back(
        "the pooled vector of a pair is a conical combination of its two attribute vectors");
    cert.assumptions.push_back("cos(a,b) > -1 for every base pair");
  } else {
    cert.assumptions.push_back(
        "the pooled vector of a pair is a positive multiple of the sum of its two attribute "
        "vectors");
  }
  if (dist) {
    if (sig_pooling) {
      cert.assumptions.push_back(
          "some hyperplane through the origin separates the pooled pairs capturing x from those "
          "capturing y");
    } else {
      cert.assumptions.push_back(
          "on unit vectors, distance labelling of b equals dot labelling with threshold "
          "(1 + |b|^2 - theta_b^2)/2");
    }
  }
  cert.assumptions.push_back("thresholds of x and y are positive");

  bool side_ok = empty_rejects;
  if (sig_pooling) {
    AtomSet exclude = AtomSet::of({x, y});
    for (std::size_t a : base) exclude = exclude.with(a);
    ordered_json witnesses = ordered_json::object();
    for (std::size_t i = 0; i < base.size(); ++i) {
      for (std::size_t j = i + 1; j < base.size(); ++j) {
        const auto z = shared_consequence(relation, base[i], base[j], exclude);
        const std::string key = sig.name(base[i]) + sig.name(base[j]);
        witnesses[key] = z ? ordered_json(sig.name(*z)) : ordered_json(nullptr);
        side_ok = side_ok && z.has_value();
      }
    }
    side["pair_cosine_witnesses"] = std::move(witnesses);
  }

  const ConicalRequirement req = derive_conical_requirement(relation, base, x, y);
  const ConicalOutcome outcome = conical_closure_certify(req);
  cert.evidence = closure_json(req, outcome);
  cert.evidence["side_conditions"] = std::move(side);
  cert.reverified = replay_trace(req, outcome);
  cert.verdict = (!outcome.consistent && side_ok) ? Verdict::kNotSimulable : Verdict::kInconclusive;
  return cert;
}

Certificate certify_tied_symmetry(Certificate cert, const Oracle& oracle) {
  const ConsequenceRelation& relation = oracle.relation;
  const Signature& sig = relation.signature();
  cert.evidence_kind = "decided";
  cert.assumptions.push_back("tied Hadamard row labels with threshold 0");
  for (std::size_t a = 0; a < sig.size(); ++a) {
    for (std::size_t b = 0; b < sig.size(); ++b) {
      if (a == b) continue;
      const bool forward = relation.holds(AtomSet::of({a}), b);
      const bool backward = relation.holds(AtomSet::of({b}), a);
      if (!forward || backward) continue;
      ordered_json ev;
      ev["type"] = "symmetry_argument";
      ev["required"] = sig.name(a) + " -> " + sig.name(b);
      ev["forbidden"] = sig.name(b) + " -> " + sig.name(a);
      ev["argument"] = "the pooled singleton is the attribute vector itself, so " + sig.name(b) +
                       " is captured from {" + sig.name(a) + "} iff " + sig.name(a) + "." +
                       sig.name(b) + " >= 0 iff " + sig.name(a) + " is captured from {" +
                       sig.name(b) + "}";
      cert.evidence = std::move(ev);
      cert.verdict = Verdict::kNotSimulable;
      cert.reverified = oracle.direct(AtomSet::of({a}), b) && !oracle.direct(AtomSet::of({b}), a);
      return cert;
    }
  }
  cert.verdict = Verdict::kInconclusive;
  cert.evidence = ordered_json{{"type", "symmetry_argument"}, {"required", nullptr}};
  cert.reverified = true;
  return cert;
}

Certificate certify_order(Certificate cert, const Oracle& oracle) {
  const ConsequenceRelation& relation = oracle.relation;
  const Signature& sig = relation.signature();
  const std::size_t n = sig.size();
  const std::size_t cap = default_subset_cap(n);
  cert.evidence_kind = "decided";
  // A violation of S subset S' reduces to one along a chain of single-atom
  // extensions, so only S' = S + {c} is searched.
  for (const Query& q : all_queries(n, cap)) {
    if (q.head != 0) continue;  // one visit per antecedent
    const AtomSet s = q.antecedent;
    const std::uint64_t base = relation.consequences(s);
    for (std::size_t c = 0; c < n; ++c) {
      if (s.contains(c)) continue;
      const AtomSet extended = s.with(c);
      const std::uint64_t lost = base & ~relation.consequences(extended);
      if (lost == 0) continue;
      std::size_t head = 0;
      while (((lost >> head) & 1U) == 0) ++head;
      const std::string x = sig.name(head);
      std::string max_args;
      for (const auto& name : names_of(sig, extended)) {
        max_args += (max_args.empty() ? "" : ", ") + name;
      }
      std::string s_args;
      for (const auto& name : names_of(sig, s)) s_args += (s_args.empty() ? "" : ", ") + name;
      const std::string s_max = s.size() == 1 ? s_args : "max(" + s_args + ")";
      ordered_json ev;
      ev["type"] = "order_argument";
      ev["antecedent"] = names_of(sig, s);
      ev["extended"] = names_of(sig, extended);
      ev["head"] = x;
      ev["argument"] = x + " ⪯ " + s_max + " forces " + x + " ⪯ max(" + max_args + "), since " +
                       s_max + " ⪯ max(" + max_args + ")";
      ev["required"] = query_text(sig, Query{s, head}) + " captured";
      ev["forbidden"] = query_text(sig, Query{extended, head}) + " captured";
      cert.evidence = std::move(ev);
      cert.verdict = Verdict::kNotSimulable;
      cert.reverified = oracle.direct(s, head) && !oracle.direct(extended, head);
      return cert;
    }
  }
  cert.verdict = Verdict::kInconclusive;
  cert.evidence = ordered_json{{"type", "order_argument"}, {"antecedent", nullptr}};
  cert.reverified = true;
  return cert;
}

}  // namespace

// ---------------------------------------------------------------------------
// LP encodings

AvgDotSystem build_avg_dot_system(const ConsequenceRelation& relation,
                                  const std::vector<Query>& queries) {
  const Signature& sig = relation.signature();
  check_queries(sig, queries);
  AvgDotSystem out;
  out.atoms = sig.size();
  for (std::size_t a = 0; a < out.atoms; ++a) {
    for (std::size_t b = 0; b < out.atoms; ++b) {
      out.system.add_variable("M[" + sig.name(a) + "][" + sig.name(b) + "]");
    }
  }
  for (std::size_t b = 0; b < out.atoms; ++b) out.system.add_variable("lambda[" + sig.name(b) + "]");

  for (const auto& q : queries) {
    const bool captured = relation.holds(q.antecedent, q.head);
    const Rational k(static_cast<long>(q.antecedent.size()));
    Constraint c;
    for (std::size_t a : q.antecedent.atoms()) c.terms[out.matrix_var(a, q.head)] = 1;
    c.terms[out.lambda_var(q.head)] = -k;
    c.relation = captured ? Relation::kGreaterEqual : Relation::kLessEqual;
    c.rhs = captured ? Rational(0) : Rational(-k);
    c.label = query_text(sig, q) + (captured ? " captured" : " rejected");
    out.system.add_constraint(std::move(c));
    out.queries.push_back(q);
    out.captured.push_back(captured);
  }
  return out;
}

AvgDotSystem build_avg_dot_system(const ConsequenceRelation& relation, std::size_t subset_cap) {
  return build_avg_dot_system(relation, capped_queries(relation.signature(), subset_cap));
}

std::size_t AvgDistRelaxation::gram_var(std::size_t a, std::size_t a2) const {
  if (a > a2) std::swap(a, a2);
  // Row-major upper triangle.
  return a * atoms - a * (a - 1) / 2 + (a2 - a);
}
std::size_t AvgDistRelaxation::cross_var(std::size_t b, std::size_t a) const {
  return atoms * (atoms + 1) / 2 + b * atoms + a;
}
std::size_t AvgDistRelaxation::norm_var(std::size_t b) const {
  return atoms * (atoms + 1) / 2 + atoms * atoms + b;
}
std::size_t AvgDistRelaxation::radius_var(std::size_t b) const {
  return atoms * (atoms + 1) / 2 + atoms * atoms + atoms + b;
}

AvgDistRelaxation build_avg_dist_relaxation(const ConsequenceRelation& relation,
                                            const std::vector<Query>& queries) {
  const Signature& sig = relation.signature();
  check_queries(sig, queries);
  AvgDistRelaxation out;
  out.atoms = sig.size();
  const std::size_t n = out.atoms;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t a2 = a; a2 < n; ++a2) {
      out.system.add_variable("G[" + sig.name(a) + "][" + sig.name(a2) + "]");
    }
  }
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t a = 0; a < n; ++a) {
      out.system.add_variable("c[" + sig.name(b) + "][" + sig.name(a) + "]");
    }
  }
  for (std::size_t b = 0; b < n; ++b) out.system.add_variable("n[" + sig.name(b) + "]");
  for (std::size_t b = 0; b < n; ++b) out.system.add_variable("t[" + sig.name(b) + "]");

  for (const auto& q : queries) {
    const bool captured = relation.holds(q.antecedent, q.head);
    const auto members = q.antecedent.atoms();
    const Rational k(static_cast<long>(members.size()));
    Constraint c;
    for (std::size_t i = 0; i < members.size(); ++i) {
      c.terms[out.gram_var(members[i], members[i])] += 1;
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        c.terms[out.gram_var(members[i], members[j])] += 2;
      }
      c.terms[out.cross_var(q.head, members[i])] += -2 * k;
    }
    c.terms[out.norm_var(q.head)] = k * k;
    c.terms[out.radius_var(q.head)] = -k * k;
    c.relation = captured ? Relation::kLessEqual : Relation::kGreaterEqual;
    c.rhs = captured ? Rational(0) : Rational(k * k);
    c.label = query_text(sig, q) + (captured ? " captured" : " rejected");
    out.system.add_constraint(std::move(c));
    out.queries.push_back(q);
    out.captured.push_back(captured);
  }
  return out;
}

AvgDistRelaxation build_avg_dist_relaxation(const ConsequenceRelation& relation,
                                            std::size_t subset_cap) {
  return build_avg_dist_relaxation(relation, capped_queries(relation.signature(), subset_cap));
}

AttributeEmbedding realize_from_matrix(const Signature& signature,
                                       const std::vector<std::vector<Rational>>& matrix,
                                       const std::vector<Rational>& lambdas) {
  const std::size_t n = signature.size();
  if (matrix.size() != n || lambdas.size() != n) {
    throw DimensionMismatch("matrix and thresholds must have one entry per atom");
  }
  for (const auto& row : matrix) {
    if (row.size() != n) throw DimensionMismatch("matrix must be square");
  }
  std::vector<AttributeVectors> atoms;
  for (std::size_t b = 0; b < n; ++b) {
    AttributeVectors v;
    v.name = signature.name(b);
    v.context = zeros(n);
    v.context[b] = 1;
    v.output = zeros(n);
    for (std::size_t a = 0; a < n; ++a) v.output[a] = matrix[a][b];
    v.lambda = lambdas[b];
    v.theta = 0;
    atoms.push_back(std::move(v));
  }
  return AttributeEmbedding(n, std::move(atoms));
}

AttributeEmbedding realize_from_outcome(const AvgDotSystem& system, const Signature& signature,
                                        const FeasibilityOutcome& outcome) {
  if (!outcome.feasible()) {
    throw ContractViolation("cannot realize an embedding from an infeasible system");
  }
  if (signature.size() != system.atoms) throw DimensionMismatch("signature size differs from system");
  const auto& values = outcome.witness().values;
  const std::size_t n = system.atoms;
  std::vector<std::vector<Rational>> matrix(n, std::vector<Rational>(n));
  std::vector<Rational> lambdas(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) matrix[a][b] = values.at(system.matrix_var(a, b));
  }
  for (std::size_t b = 0; b < n; ++b) lambdas[b] = values.at(system.lambda_var(b));
  return realize_from_matrix(signature, matrix, lambdas);
}

// ---------------------------------------------------------------------------
// Certificates

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kSimulable:
      return "simulable";
    case Verdict::kNotSimulable:
      return "not-simulable";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "?";
}

ordered_json to_json(const Certificate& certificate) {
  ordered_json j;
  j["strategy"] = certificate.strategy.name();
  j["fixture"] = certificate.fixture;
  j["relation"] = to_string(certificate.relation);
  j["verdict"] = to_string(certificate.verdict);
  j["evidence_kind"] = certificate.evidence_kind;
  j["evidence"] = certificate.evidence;
  j["assumptions"] = certificate.assumptions;
  j["reverified"] = certificate.reverified;
  return j;
}

Certificate certify_strategy_failure(const StrategyId& strategy, const Fixture& fixture,
                                     RelationKind relation) {
  const Oracle oracle = fixture_oracle(fixture, relation);
  Certificate cert = base_certificate(strategy, fixture.name, relation);
  if (relation == RelationKind::kNonMonotonic &&
      std::holds_alternative<KnowledgeBase>(parse_fixture(fixture))) {
    cert.assumptions.push_back("non-monotonic relation of the single-stratum base (/\\ K)");
  }
  const Signature& sig = oracle.relation.signature();

  switch (strategy.pooling) {
    case Pooling::kAvg:
      if (strategy.labelling == Labelling::kDot) {
        return certify_with_avg_dot(std::move(cert), oracle.relation, oracle.hash,
                                    fixture_queries(fixture.name, sig));
      }
      if (strategy.labelling == Labelling::kDist) {
        return certify_with_dist_relaxation(std::move(cert), oracle.relation,
                                            fixture_queries(fixture.name, sig));
      }
      break;
    case Pooling::kNorm:
    case Pooling::kSig:
      return certify_conical(std::move(cert), oracle.relation);
    case Pooling::kHad:
      if (strategy.tied_vectors) return certify_tied_symmetry(std::move(cert), oracle);
      break;
    case Pooling::kOrd:
      return certify_order(std::move(cert), oracle);
  }
  throw ContractViolation("strategy '" + strategy.name() +
                          "' simulates every knowledge base; use construct instead");
}

namespace {

Certificate certify_generic(const ConsequenceRelation& relation, const std::string& hash,
                            const std::string& name, std::optional<std::size_t> subset_cap) {
  const Signature& sig = relation.signature();
  if (sig.size() > kGenericAvgDotCap) {
    throw CapExceeded("generic (avg, dot) decision supports at most " +
                      std::to_string(kGenericAvgDotCap) + " atoms");
  }
  const std::size_t cap = std::min(subset_cap.value_or(sig.size()), sig.size());
  if (cap == 0) throw ContractViolation("subset cap must be positive");
  Certificate cert =
      base_certificate(StrategyId{Pooling::kAvg, Labelling::kDot, false}, name, relation.kind());
  cert = certify_with_avg_dot(std::move(cert), relation, hash, capped_queries(sig, cap));
  if (cap < sig.size()) {
    cert.assumptions.push_back("antecedents larger than " + std::to_string(cap) +
                               " atoms not encoded");
  }
  return cert;
}

}  // namespace

Certificate certify_avg_dot(const KnowledgeBase& kb, const std::string& name,
                            std::optional<std::size_t> subset_cap) {
  if (kb.signature.size() > kGenericAvgDotCap) {
    throw CapExceeded("generic (avg, dot) decision supports at most " +
                      std::to_string(kGenericAvgDotCap) + " atoms");
  }
  return certify_generic(ConsequenceRelation::monotonic(kb), kb_hash(kb), name, subset_cap);
}

Certificate certify_avg_dot(const StratifiedKB& theta, const std::string& name,
                            std::optional<std::size_t> subset_cap) {
  if (theta.signature.size() > kGenericAvgDotCap) {
    throw CapExceeded("generic (avg, dot) decision supports at most " +
                      std::to_string(kGenericAvgDotCap) + " atoms");
  }
  return certify_generic(ConsequenceRelation::ranked(theta), kb_hash(theta), name, subset_cap);
}

}  // namespace embedsim
