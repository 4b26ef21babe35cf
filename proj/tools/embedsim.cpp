// embedsim: command-line front end.
//
//   embedsim check     KB | --fixture NAME
//   embedsim construct KB | --fixture NAME  --prop N [--delta D] [-o FILE]
//   embedsim verify    KB | --fixture NAME  EMBEDDING --strategy S [--cap N]
//   embedsim certify   KB | --fixture NAME  --strategy S [--expect V]
//   embedsim table1    [--json] [--md]
//
// Exit codes: 0 success, 1 semantic negative, 2 usage or input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "embedsim/certifier.hpp"
#include "embedsim/constructors.hpp"
#include "embedsim/errors.hpp"
#include "embedsim/fixtures.hpp"
#include "embedsim/table1.hpp"
#include "embedsim/verifier.hpp"
#include "json.hpp"

namespace {

using namespace embedsim;
using nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

struct InputError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct KbSource {
  std::string path;
  std::string fixture;

  ParsedKB load() const {
    if (!fixture.empty()) return parse_fixture(embedsim::fixture(fixture));
    if (path.empty()) throw InputError("a KB file or --fixture is required");
    return parse_kb(read_file(path));
  }
  std::string label() const { return fixture.empty() ? path : fixture; }
};

void add_kb_source(CLI::App* cmd, KbSource& src) {
  auto* file = cmd->add_option("kb", src.path, "knowledge base file");
  auto* fix = cmd->add_option("--fixture", src.fixture, "bundled fixture name");
  file->excludes(fix);
}

// Options that may come from the config file or EMBEDSIM_* variables.
struct Settings {
  std::size_t cap = 0;  // 0: default per KB size
  std::string delta;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

int cmd_check(const KbSource& src, bool json) {
  const ParsedKB parsed = src.load();
  ordered_json j;
  if (const auto* kb = std::get_if<KnowledgeBase>(&parsed)) {
    const auto models = enumerate_models(*kb);
    j["kind"] = "monotonic";
    j["atoms"] = kb->signature.size();
    j["formulas"] = kb->formulas.size();
    j["models"] = models.size();
    j["consistent"] = !models.empty();
    if (!json) {
      std::cout << "monotonic, " << kb->formulas.size() << " formulas over "
                << kb->signature.size() << " atoms\nmodels: " << models.size() << "\n";
      if (models.empty()) std::cout << "inconsistent\n";
    }
  } else {
    const auto& theta = std::get<StratifiedKB>(parsed);
    if (theta.signature.size() > kDefaultModelCap) {
      throw CapExceeded("rank computation over more than " + std::to_string(kDefaultModelCap) +
                        " atoms");
    }
    std::map<std::size_t, std::size_t> ranks;
    const std::uint64_t count = std::uint64_t{1} << theta.signature.size();
    for (std::uint64_t bits = 0; bits < count; ++bits) ++ranks[rank_mu(theta, Interpretation{bits})];
    j["kind"] = "stratified";
    j["atoms"] = theta.signature.size();
    j["strata"] = theta.strata.size();
    ordered_json by_rank = ordered_json::object();
    for (const auto& [r, n] : ranks) by_rank[std::to_string(r)] = n;
    j["interpretations_by_rank"] = by_rank;
    if (!json) {
      std::cout << "stratified, k=" << theta.strata.size() << " over "
                << theta.signature.size() << " atoms\ninterpretations by rank:";
      for (const auto& [r, n] : ranks) std::cout << " " << r << ":" << n;
      std::cout << "\n";
    }
  }
  if (json) std::cout << j.dump(2) << "\n";
  return kOk;
}

int cmd_construct(const KbSource& src, int prop, const Settings& settings,
                  const std::string& output) {
  const ParsedKB parsed = src.load();
  const bool stratified = std::holds_alternative<StratifiedKB>(parsed);
  if (prop < 1 || prop > 5) throw InputError("--prop must be 1..5");
  if (stratified != (prop >= 4)) {
    throw InputError("construction " + std::to_string(prop) + " needs a " +
                     (prop >= 4 ? "stratified" : "monotonic") + " knowledge base");
  }
  const std::size_t atoms = stratified ? std::get<StratifiedKB>(parsed).signature.size()
                                       : std::get<KnowledgeBase>(parsed).signature.size();
  std::optional<DeltaConfig> delta;
  if (!settings.delta.empty()) {
    BigInt d;
    if (d.set_str(settings.delta, 10) != 0) throw InputError("--delta must be an integer");
    delta = DeltaConfig::checked(d, atoms);
  }
  ConstructionResult result = [&] {
    switch (prop) {
      case 1:
        return construct_avg_relu(std::get<KnowledgeBase>(parsed), delta);
      case 2:
        return construct_had_dot(std::get<KnowledgeBase>(parsed), delta);
      case 3:
        return construct_ord(std::get<KnowledgeBase>(parsed));
      case 4:
        return construct_avg_relu_nm(std::get<StratifiedKB>(parsed), delta);
      default:
        return construct_had_dot_nm(std::get<StratifiedKB>(parsed), delta);
    }
  }();
  write_output(to_json(result).dump(2) + "\n", output);
  if (!output.empty() && output != "-") {
    std::cerr << "wrote " << result.strategy.name() << " embedding of dimension "
              << result.embedding.dimension() << " to " << output << "\n";
  }
  return kOk;
}

int cmd_verify(const KbSource& src, const std::string& embedding_path,
               const std::string& strategy_name, const Settings& settings, bool json) {
  const StrategyId strategy = StrategyId::parse(strategy_name);
  const ParsedKB parsed = src.load();
  nlohmann::json ej;
  try {
    ej = nlohmann::json::parse(read_file(embedding_path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError("embedding JSON: " + std::string(e.what()));
  }
  const AttributeEmbedding embedding = embedding_from_json(ej);
  VerificationOptions options;
  if (settings.cap != 0) options.subset_cap = settings.cap;
  options.threads = settings.threads;
  const VerificationReport report =
      std::holds_alternative<KnowledgeBase>(parsed)
          ? verify_monotonic(embedding, strategy, std::get<KnowledgeBase>(parsed), options)
          : verify_nonmonotonic(embedding, strategy, std::get<StratifiedKB>(parsed), options);
  if (json) {
    std::cout << to_json(report).dump(2) << "\n";
  } else {
    std::cout << strategy.name() << " on " << src.label() << ": "
              << (report.simulates() ? "simulates" : "mismatch") << " (" << report.queries_checked
              << " queries, " << report.mismatches.size() << " mismatches)\n";
    for (const auto& m : report.mismatches) {
      std::string body;
      for (const auto& a : m.antecedent) body += (body.empty() ? "" : " & ") + a;
      std::cout << "  " << body << " -> " << m.head << ": expected "
                << (m.expected ? "captured" : "rejected") << ", got "
                << (m.got ? "captured" : "rejected") << " [" << m.score << "]\n";
    }
    for (const auto& a : report.annotations) std::cout << "  note: " << a << "\n";
  }
  return report.simulates() ? kOk : kNegative;
}

int cmd_certify(const KbSource& src, const std::string& strategy_name,
                const std::string& relation_name, const std::string& expect,
                const Settings& settings, bool json) {
  const StrategyId strategy = StrategyId::parse(strategy_name);
  std::optional<RelationKind> relation;
  if (relation_name == "monotonic") relation = RelationKind::kMonotonic;
  if (relation_name == "nonmonotonic") relation = RelationKind::kNonMonotonic;

  Certificate cert;
  if (!src.fixture.empty()) {
    const Fixture& f = fixture(src.fixture);
    const bool stratified = std::holds_alternative<StratifiedKB>(parse_fixture(f));
    cert = certify_strategy_failure(
        strategy, f,
        relation.value_or(stratified ? RelationKind::kNonMonotonic : RelationKind::kMonotonic));
  } else {
    if (!(strategy == StrategyId{Pooling::kAvg, Labelling::kDot, false})) {
      throw InputError("KB files are decided for avg-dot only; use --fixture for " +
                       strategy.name());
    }
    const ParsedKB parsed = src.load();
    std::optional<std::size_t> cap;
    if (settings.cap != 0) cap = settings.cap;
    if (const auto* kb = std::get_if<KnowledgeBase>(&parsed)) {
      cert = relation == RelationKind::kNonMonotonic
                 ? certify_avg_dot(single_stratum(*kb), src.label(), cap)
                 : certify_avg_dot(*kb, src.label(), cap);
    } else {
      if (relation == RelationKind::kMonotonic) {
        throw InputError("stratified KB needs the non-monotonic relation");
      }
      cert = certify_avg_dot(std::get<StratifiedKB>(parsed), src.label(), cap);
    }
  }

  if (json) {
    std::cout << to_json(cert).dump(2) << "\n";
  } else {
    std::cout << cert.strategy.name() << " on " << cert.fixture << " ("
              << to_string(cert.relation) << "): " << to_string(cert.verdict) << "\n"
              << "  evidence: " << cert.evidence.value("type", std::string("none")) << ", "
              << cert.evidence_kind << ", " << (cert.reverified ? "re-verified" : "NOT re-verified")
              << "\n";
    if (cert.evidence.contains("combination")) {
      std::cout << "  combination: " << cert.evidence["combination"].get<std::string>() << "\n";
    }
    if (cert.evidence.contains("argument")) {
      std::cout << "  argument: " << cert.evidence["argument"].get<std::string>() << "\n";
    }
    if (cert.evidence.contains("cases_examined")) {
      std::cout << "  cases examined: " << cert.evidence["cases_examined"].get<std::size_t>()
                << ", surviving: " << cert.evidence["surviving"].get<int>() << "\n";
    }
    for (const auto& a : cert.assumptions) std::cout << "  assumes: " << a << "\n";
  }
  if (!cert.reverified) return kNegative;
  if (!expect.empty() && to_string(cert.verdict) != expect) return kNegative;
  return kOk;
}

int cmd_table1(const Settings& settings, bool json, bool md) {
  Table1Options options;
  options.threads = settings.threads;
  options.seed = settings.seed;
  if (settings.cap != 0) options.subset_cap = settings.cap;
  if (!settings.delta.empty()) {
    BigInt d;
    if (d.set_str(settings.delta, 10) != 0) throw InputError("--delta must be an integer");
    options.delta = d;
  }
  Table1Report report;
  try {
    report = run_table1(options);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNegative;
  }
  if (json) {
    std::cout << to_json(report).dump(2) << "\n";
  } else if (md) {
    std::cout << to_markdown(report);
  } else {
    for (const auto& row : report.rows) {
      std::cout << row.strategy.name() << ": monotonic "
                << (row.monotonic.supported ? "yes" : "no") << " (" << row.monotonic.summary
                << "), non-monotonic " << (row.nonmonotonic.supported ? "yes" : "no") << " ("
                << row.nonmonotonic.summary << ")\n";
    }
  }
  return kOk;
}

// Values from --config become defaults, so env vars and flags override them.
void apply_config(int argc, char** argv, Settings& settings) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
  }
  if (path.empty()) return;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
    if (j.contains("cap")) settings.cap = j["cap"].get<std::size_t>();
    if (j.contains("delta")) {
      settings.delta = j["delta"].is_string() ? j["delta"].get<std::string>()
                                              : std::to_string(j["delta"].get<long long>());
    }
    if (j.contains("seed")) settings.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) settings.threads = j["threads"].get<unsigned>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config '" + path + "': " + e.what());
  }
}

int run(int argc, char** argv) {
  Settings settings;
  apply_config(argc, argv, settings);

  CLI::App app{"Decide, construct and certify pooling-based simulation of attribute dependencies"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with cap, delta, seed, threads");

  auto add_settings = [&](CLI::App* cmd, bool cap, bool delta, bool seed, bool threads) {
    if (cap) {
      cmd->add_option("--cap", settings.cap, "largest antecedent size checked")
          ->envname("EMBEDSIM_CAP")
          ->capture_default_str();
    }
    if (delta) {
      cmd->add_option("--delta", settings.delta, "penalty base, must exceed 2^|A|")
          ->envname("EMBEDSIM_DELTA");
    }
    if (seed) {
      cmd->add_option("--seed", settings.seed, "seed for numeric diagnostics")
          ->envname("EMBEDSIM_SEED");
    }
    if (threads) {
      cmd->add_option("--threads", settings.threads, "worker threads, 0 = all cores")
          ->envname("EMBEDSIM_THREADS");
    }
  };

  bool json = false;
  bool md = false;
  KbSource src;

  auto* check = app.add_subcommand("check", "parse a KB and summarize it");
  add_kb_source(check, src);
  check->add_flag("--json", json);

  int prop = 0;
  std::string output;
  auto* construct = app.add_subcommand("construct", "build an embedding by construction 1..5");
  add_kb_source(construct, src);
  construct->add_option("--prop", prop, "construction number 1..5")->required();
  construct->add_option("-o,--output", output, "output file (default stdout)");
  add_settings(construct, false, true, false, false);

  std::string strategy;
  auto* verify = app.add_subcommand("verify", "check an embedding against a KB");
  verify->add_option("--fixture", src.fixture, "bundled fixture name");
  std::vector<std::string> verify_files;
  verify->add_option("files", verify_files, "[KB] EMBEDDING")->expected(1, 2)->required();
  verify->add_option("--strategy", strategy, "strategy name, e.g. avg-relu")->required();
  verify->add_flag("--json", json);
  add_settings(verify, true, false, false, true);

  std::string relation;
  std::string expect;
  auto* certify = app.add_subcommand("certify", "certify (non-)simulability");
  add_kb_source(certify, src);
  certify->add_option("--strategy", strategy, "strategy name")->required();
  certify->add_option("--relation", relation, "monotonic or nonmonotonic")
      ->check(CLI::IsMember({"monotonic", "nonmonotonic"}));
  certify->add_option("--expect", expect, "exit 1 unless the verdict matches")
      ->check(CLI::IsMember({"simulable", "not-simulable", "inconclusive"}));
  certify->add_flag("--json", json);
  add_settings(certify, true, false, false, false);

  auto* table1 = app.add_subcommand("table1", "reproduce the strategy overview table");
  table1->add_flag("--json", json);
  table1->add_flag("--md", md);
  add_settings(table1, true, true, true, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (check->parsed()) return cmd_check(src, json);
  if (construct->parsed()) return cmd_construct(src, prop, settings, output);
  if (verify->parsed()) {
    const std::string embedding_path = verify_files.back();
    if (verify_files.size() == 2) src.path = verify_files.front();
    if (src.fixture.empty() && src.path.empty()) throw InputError("a KB file or --fixture is required");
    if (!src.fixture.empty() && !src.path.empty()) throw InputError("give a KB file or --fixture, not both");
    return cmd_verify(src, embedding_path, strategy, settings, json);
  }
  if (certify->parsed()) return cmd_certify(src, strategy, relation, expect, settings, json);
  return cmd_table1(settings, json, md);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kUsage;
}
