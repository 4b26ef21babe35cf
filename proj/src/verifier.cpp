#include "embedsim/verifier.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <map>
#include <thread>

#include "embedsim/errors.hpp"

namespace embedsim {
namespace {

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> names_of(const Signature& sig, AtomSet s) {
  std::vector<std::string> out;
  for (std::size_t a : s.atoms()) out.push_back(sig.name(a));
  return out;
}

std::string set_text(const Signature& sig, AtomSet s) {
  std::string out = "{";
  for (const auto& name : names_of(sig, s)) out += (out.size() > 1 ? "," : "") + name;
  return out + "}";
}

// Queries grouped by antecedent, groups in canonical order.
struct QueryGroup {
  AtomSet antecedent;
  std::vector<std::size_t> heads;
};

std::vector<QueryGroup> group_queries(std::vector<Query> queries) {
  std::sort(queries.begin(), queries.end(), canonical_less);
  queries.erase(std::unique(queries.begin(), queries.end()), queries.end());
  std::vector<QueryGroup> groups;
  for (const auto& q : queries) {
    if (groups.empty() || groups.back().antecedent != q.antecedent) {
      groups.push_back(QueryGroup{q.antecedent, {}});
    }
    groups.back().heads.push_back(q.head);
  }
  return groups;
}

}  // namespace

std::size_t default_subset_cap(std::size_t atoms) { return atoms <= 8 ? atoms : 4; }

std::string kb_hash(const KnowledgeBase& kb) { return fnv1a_hex(canonical_text(kb)); }
std::string kb_hash(const StratifiedKB& theta) { return fnv1a_hex(canonical_text(theta)); }

VerificationReport verify_relation(const AttributeEmbedding& embedding,
                                   const StrategyId& strategy,
                                   const ConsequenceRelation& relation, std::string hash,
                                   const VerificationOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const Signature& sig = relation.signature();
  if (!(embedding.signature() == sig)) {
    throw DimensionMismatch("embedding atoms do not match the knowledge base signature");
  }
  if (!is_exact(strategy)) {
    throw ContractViolation("strategy '" + strategy.name() + "' has no exact evaluator");
  }

  VerificationReport report;
  report.strategy = strategy;
  report.relation = relation.kind();
  report.kb_hash = std::move(hash);
  report.annotations.push_back("empty antecedent excluded");

  std::vector<Query> queries;
  if (options.queries) {
    queries = *options.queries;
    for (const auto& q : queries) {
      if (q.antecedent.empty()) throw ContractViolation("query with empty antecedent");
      if ((q.antecedent.bits & ~sig.full_mask()) != 0 || q.head >= sig.size()) {
        throw ContractViolation("query references atoms outside the signature");
      }
      report.subset_cap = std::max(report.subset_cap, q.antecedent.size());
    }
    report.annotations.push_back("explicit query list");
  } else {
    report.subset_cap = options.subset_cap.value_or(default_subset_cap(sig.size()));
    if (report.subset_cap < sig.size()) {
      report.annotations.push_back("subset cap " + std::to_string(report.subset_cap) + " < " +
                                   std::to_string(sig.size()) +
                                   " atoms; larger antecedents not checked");
    }
    queries = all_queries(sig.size(), report.subset_cap);
  }

  const auto groups = group_queries(std::move(queries));
  std::vector<std::vector<Mismatch>> results(groups.size());
  std::vector<std::exception_ptr> errors(groups.size());

  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t g = first; g < groups.size(); g += stride) {
      try {
        const auto& group = groups[g];
        const Pooled pooled = pool(embedding, strategy, group.antecedent);
        const std::uint64_t expected_mask = relation.consequences(group.antecedent);
        for (std::size_t b : group.heads) {
          const bool expected = (expected_mask >> b) & 1U;
          LabelDecision got = label(embedding, strategy, pooled, b);
          if (got.captured != expected) {
            results[g].push_back(Mismatch{Query{group.antecedent, b},
                                          names_of(sig, group.antecedent), sig.name(b), expected,
                                          got.captured, std::move(got.score)});
          }
        }
      } catch (...) {
        errors[g] = std::current_exception();
      }
    }
  };

  unsigned threads = options.threads == 0 ? std::max(1U, std::thread::hardware_concurrency())
                                          : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, groups.size())));
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool_threads;
    for (unsigned t = 0; t < threads; ++t) pool_threads.emplace_back(work, t, threads);
    for (auto& t : pool_threads) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (std::size_t g = 0; g < groups.size(); ++g) {
    report.queries_checked += groups[g].heads.size();
    for (auto& m : results[g]) report.mismatches.push_back(std::move(m));
  }
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

VerificationReport verify_monotonic(const AttributeEmbedding& embedding,
                                    const StrategyId& strategy, const KnowledgeBase& kb,
                                    const VerificationOptions& options) {
  return verify_relation(embedding, strategy, ConsequenceRelation::monotonic(kb), kb_hash(kb),
                         options);
}

VerificationReport verify_nonmonotonic(const AttributeEmbedding& embedding,
                                       const StrategyId& strategy, const StratifiedKB& theta,
                                       const VerificationOptions& options) {
  return verify_relation(embedding, strategy, ConsequenceRelation::ranked(theta),
                         kb_hash(theta), options);
}

nlohmann::ordered_json to_json(const VerificationReport& report, bool include_timing) {
  nlohmann::ordered_json j;
  j["strategy"] = report.strategy.name();
  j["relation"] = to_string(report.relation);
  j["kb_hash"] = report.kb_hash;
  j["subset_cap"] = report.subset_cap;
  j["queries_checked"] = report.queries_checked;
  j["verdict"] = report.simulates() ? "simulates" : "mismatch";
  auto mismatches = nlohmann::ordered_json::array();
  for (const auto& m : report.mismatches) {
    nlohmann::ordered_json entry;
    entry["antecedent"] = m.antecedent;
    entry["head"] = m.head;
    entry["expected"] = m.expected;
    entry["got"] = m.got;
    entry["score"] = m.score;
    mismatches.push_back(std::move(entry));
  }
  j["mismatches"] = std::move(mismatches);
  j["annotations"] = report.annotations;
  if (include_timing) j["elapsed_ms"] = report.elapsed_ms;
  return j;
}

// ---------------------------------------------------------------------------
// Structural properties

PropertyReport check_ord_monotonicity(const AttributeEmbedding& embedding,
                                      std::optional<std::size_t> subset_cap) {
  const Signature& sig = embedding.signature();
  const std::size_t n = sig.size();
  const std::size_t cap = subset_cap.value_or(default_subset_cap(n));
  if (n > 24) throw CapExceeded("order monotonicity check over more than 24 atoms");

  // Label set of every antecedent within the cap.
  std::map<std::uint64_t, std::uint64_t> labels;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t bits = 1; bits < count; ++bits) {
    if (static_cast<std::size_t>(std::popcount(bits)) > cap) continue;
    const Vector e = emb_ord(embedding, AtomSet{bits});
    std::uint64_t mask = 0;
    for (std::size_t b = 0; b < n; ++b) {
      if (lab_ord(embedding, e, b)) mask |= std::uint64_t{1} << b;
    }
    labels[bits] = mask;
  }

  PropertyReport report;
  for (const auto& [super, super_labels] : labels) {
    // Every nonempty subset of `super`.
    for (std::uint64_t sub = super; sub != 0; sub = (sub - 1) & super) {
      const std::uint64_t sub_labels = labels.at(sub);
      ++report.checks;
      const bool ok = (sub_labels & ~super_labels) == 0;
      if (report.trace.size() < 3 && sub != super) {
        report.trace.push_back("S=" + set_text(sig, AtomSet{sub}) + " <= S'=" +
                               set_text(sig, AtomSet{super}) + ": Lab(S)=" +
                               set_text(sig, AtomSet{sub_labels}) + " <= Lab(S')=" +
                               set_text(sig, AtomSet{super_labels}));
      }
      if (!ok && report.holds) {
        report.holds = false;
        report.counterexample = "S=" + set_text(sig, AtomSet{sub}) + " S'=" +
                                set_text(sig, AtomSet{super});
      }
    }
  }
  return report;
}

PropertyReport check_tied_hadamard_symmetry(const AttributeEmbedding& embedding) {
  for (const auto& a : embedding.atoms()) {
    if (a.lambda != 0) throw ContractViolation("tied Hadamard symmetry needs all thresholds 0");
  }
  const StrategyId strategy{Pooling::kHad, Labelling::kDot, true};
  const Signature& sig = embedding.signature();
  PropertyReport report;
  for (std::size_t a = 0; a < sig.size(); ++a) {
    for (std::size_t b = a + 1; b < sig.size(); ++b) {
      const bool forward = captures(embedding, strategy, AtomSet::of({a}), b);
      const bool backward = captures(embedding, strategy, AtomSet::of({b}), a);
      ++report.checks;
      if (report.trace.size() < 3) {
        report.trace.push_back(sig.name(a) + "->" + sig.name(b) + ": " +
                               (forward ? "captured" : "rejected") + ", " + sig.name(b) + "->" +
                               sig.name(a) + ": " + (backward ? "captured" : "rejected"));
      }
      if (forward != backward && report.holds) {
        report.holds = false;
        report.counterexample = sig.name(a) + "/" + sig.name(b);
      }
    }
  }
  return report;
}

nlohmann::ordered_json to_json(const PropertyReport& report) {
  nlohmann::ordered_json j;
  j["holds"] = report.holds;
  j["checks"] = report.checks;
  j["trace"] = report.trace;
  j["counterexample"] = report.counterexample ? nlohmann::ordered_json(*report.counterexample)
                                              : nlohmann::ordered_json(nullptr);
  return j;
}

}  // namespace embedsim
