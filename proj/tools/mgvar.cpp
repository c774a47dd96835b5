// mgvar: generate filtrations, martingales and weights, compute pointwise
// operators, run verification suites and adversarial searches, and replay
// reports from their manifests.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or config error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mgvar/errors.hpp"
#include "mgvar/filtration.hpp"
#include "mgvar/inequalities.hpp"
#include "mgvar/io.hpp"
#include "mgvar/martingale.hpp"
#include "mgvar/operators.hpp"
#include "mgvar/paths.hpp"
#include "mgvar/search.hpp"
#include "mgvar/suite.hpp"
#include "mgvar/weights.hpp"

namespace {

using namespace mgvar;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MGVAR_SEED")) {
    try {
      std::size_t used = 0;
      const auto value = std::stoull(env, &used);
      if (used == std::string(env).size()) return value;
    } catch (const std::exception&) {
    }
    throw ParameterError("MGVAR_SEED must be a nonnegative integer");
  }
  return 1;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(out);
  if (!file) throw ParameterError("cannot write '" + out + "'");
  file << text;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Options {
  int threads = 1;

  // generate
  std::string kind = "dyadic";
  int depth = 8;
  std::size_t cells = 64;
  double q_min = 0.02, q_max = 0.1;
  std::string generator = "terminal_gaussian";
  double scale = 1.0;
  std::vector<double> schedule;
  std::string filtration_in;
  double rho = 0.3;
  std::optional<std::uint64_t> seed;
  std::string out;

  // compute
  std::string op;
  std::string input;
  std::optional<double> r, lambda;
  double tolerance = 1e-12;

  // verify
  std::string suite;
  std::string config;
  std::optional<std::size_t> trials;

  // search
  std::string objective;
  std::size_t budget = 100;
  std::vector<double> r_grid;

  // replay
  std::string reports;
  std::string search_result;
};

std::shared_ptr<const Filtration> build_filtration(const Options& o, std::uint64_t seed) {
  if (!o.filtration_in.empty()) {
    return std::make_shared<const Filtration>(filtration_from_json(read_json_file(o.filtration_in)));
  }
  if (o.kind == "dyadic") return std::make_shared<const Filtration>(Filtration::dyadic(o.depth));
  if (o.kind == "comb") return std::make_shared<const Filtration>(comb_filtration(o.depth, o.q_min, o.q_max, seed));
  if (o.kind == "random") return std::make_shared<const Filtration>(random_filtration(o.depth, o.cells, seed));
  throw ParameterError("unknown filtration kind '" + o.kind + "'");
}

int cmd_generate(const std::string& what, const Options& o) {
  const std::uint64_t seed = o.seed ? *o.seed : default_seed();
  json manifest = {{"command", "generate " + what}, {"seed", seed}, {"version", kVersion}};
  if (what == "filtration") {
    const auto filt = build_filtration(o, seed);
    manifest["params"] = {{"kind", o.kind}, {"depth", o.depth}};
    auto doc = filtration_to_json(*filt);
    doc["manifest"] = manifest;
    emit(o.out, doc.dump(2) + "\n");
    return kOk;
  }
  if (what == "martingale") {
    const auto filt = build_filtration(o, seed);
    GeneratorSpec spec;
    spec.kind = generator_from_string(o.generator);
    spec.scale_min = spec.scale_max = o.scale;
    spec.schedule = o.schedule;
    const auto f = random_martingale(filt, spec, seed);
    manifest["params"] = {{"generator", to_string(spec.kind)}, {"scale", o.scale}, {"depth", filt->depth()}};
    if (!o.schedule.empty()) manifest["params"]["schedule"] = o.schedule;
    const std::string ref = o.filtration_in.empty() ? "inline:" + o.kind : o.filtration_in;
    emit(o.out, martingale_to_json(f, ref, manifest).dump(2) + "\n");
    return kOk;
  }
  if (what == "weight") {
    const auto w = cascade_weight(o.depth, o.rho, seed);
    manifest["params"] = {{"depth", o.depth}, {"rho", o.rho}};
    manifest["doubling_constant"] = doubling_constant(w, Filtration::dyadic(o.depth));
    emit(o.out, weight_to_json(w, manifest).dump(2) + "\n");
    return kOk;
  }
  throw ParameterError("unknown object kind '" + what + "'");
}

double need(const std::optional<double>& v, const char* flag, const std::string& op) {
  if (!v) throw ParameterError("operator " + op + " needs " + flag);
  return *v;
}

int cmd_compute(const Options& o) {
  const json doc = read_json_file(o.input);
  const std::string schema = schema_of(doc);
  const std::string& op = o.op;
  if (schema == "mgvar.path") {
    const auto path = path_from_json(doc);
    json out = {{"operator", op}, {"input", o.input}, {"version", kVersion}};
    if (op == "Vr") {
      const auto cert = variation(path, need(o.r, "--r", op));
      out["value"] = cert.value;
      out["certificate"] = cert.indices;
    } else if (op == "Njump") {
      const auto chain = jump_count_chain(path, need(o.lambda, "--lambda", op));
      out["value"] = chain.count;
      out["certificate"] = chain.indices;
      out["pairs"] = jump_count_pairs(path, *o.lambda);
    } else if (op == "majorant") {
      const double r = need(o.r, "--r", op);
      out["value"] = dyadic_jump_majorant(path, r, o.tolerance, r <= 2.0);
      out["variation_power"] = std::pow(variation(path, r).value, r);
    } else if (op == "M") {
      double m = 0.0;
      for (double x : path) m = std::max(m, std::fabs(x));
      out["value"] = m;
    } else if (op == "S") {
      double acc = 0.0;
      for (std::size_t i = 1; i < path.size(); ++i) acc += (path[i] - path[i - 1]) * (path[i] - path[i - 1]);
      out["value"] = std::sqrt(acc);
    } else {
      throw ParameterError("operator " + op + " is not defined on a bare path");
    }
    emit(o.out, out.dump(2) + "\n");
    return kOk;
  }
  if (schema != "mgvar.martingale") throw ParameterError("'" + o.input + "' is neither a path nor a martingale");
  const auto f = martingale_from_json(doc);
  PointwiseField field;
  json certificates;
  if (op == "M") {
    field = maximal(f);
  } else if (op == "S") {
    field = square(f);
  } else if (op == "s") {
    field = conditional_square(f);
  } else if (op == "Vr") {
    const double r = need(o.r, "--r", op);
    field = variation_pointwise(f, r);
    certificates = json::array();
    for (const auto& c : variation_certificates(f, r)) certificates.push_back({{"value", c.value}, {"indices", c.indices}});
  } else if (op == "Njump") {
    field = jump_pointwise(f, need(o.lambda, "--lambda", op));
  } else if (op == "majorant") {
    const double r = need(o.r, "--r", op);
    const auto paths = f.paths();
    std::vector<double> rows(paths.rows());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = dyadic_jump_majorant(paths.row(i), r, o.tolerance, r <= 2.0);
    field = row_field(f.filtration(), rows);
  } else {
    throw ParameterError("unknown operator '" + op + "'");
  }
  if (ends_with(o.out, ".csv")) {
    std::ostringstream os;
    write_fields_csv(os, {op}, {field});
    emit(o.out, os.str());
  } else {
    json out = {{"operator", op}, {"input", o.input}, {"values", field}, {"version", kVersion}};
    if (o.r) out["r"] = *o.r;
    if (o.lambda) out["lambda"] = *o.lambda;
    if (!certificates.is_null()) out["certificates"] = certificates;
    emit(o.out, out.dump(2) + "\n");
  }
  return kOk;
}

SuiteConfig load_config(const Options& o, const std::string& expected_suite) {
  json j = o.config.empty() ? json::object() : read_json_file(o.config);
  if (!j.is_object()) throw ParameterError("config must be a JSON object");
  if (!expected_suite.empty()) {
    if (j.contains("suite") && j.at("suite") != expected_suite) {
      throw ParameterError("config is for suite '" + j.at("suite").dump() + "', not '" + expected_suite + "'");
    }
    j["suite"] = expected_suite;
  }
  if (o.seed) j["seed"] = *o.seed;
  else if (!j.contains("seed") && std::getenv("MGVAR_SEED")) j["seed"] = default_seed();
  if (o.trials) j["trials"] = *o.trials;
  auto config = suite_config_from_json(j);
  config.threads = o.threads;
  return config;
}

int cmd_verify(const Options& o) {
  const auto config = load_config(o, o.suite);
  std::ofstream jsonl;
  if (!o.out.empty()) {
    jsonl.open(o.out);
    if (!jsonl) throw ParameterError("cannot write '" + o.out + "'");
  }
  const auto result = run_suite(config, [&](const TrialOutcome& outcome) {
    if (!jsonl.is_open()) return;
    for (const auto& rep : outcome.reports) jsonl << to_json(rep).dump() << '\n';
  });
  std::cout << to_json(result).dump(2) << '\n';
  return result.failures == 0 ? kOk : kFailed;
}

int cmd_search(const Options& o) {
  SearchParams params;
  params.objective = objective_from_string(o.objective);
  params.suite = load_config(o, "");
  const std::uint64_t seed = o.seed ? *o.seed : params.suite.seed;
  json out;
  if (!o.r_grid.empty()) {
    out = to_json(lepingle_r_grid(params, o.r_grid, o.budget, seed));
  } else {
    out = to_json(adversarial_search(params, o.budget, seed));
  }
  emit(o.out, out.dump(2) + "\n");
  return kOk;
}

int cmd_replay(const Options& o) {
  if (!o.search_result.empty()) {
    const json doc = read_json_file(o.search_result);
    const json& manifest = doc.contains("martingale_manifest") ? doc.at("martingale_manifest") : doc;
    const double replayed = replay_search(manifest);
    const double recorded = doc.contains("best_objective") ? number_from_json(doc.at("best_objective")) : replayed;
    const double gap = relative_gap(recorded, replayed);
    std::cout << json{{"recorded", number_to_json(recorded)}, {"replayed", number_to_json(replayed)},
                      {"relative_gap", number_to_json(gap)}}
                     .dump(2)
              << '\n';
    return gap <= 1e-9 ? kOk : kFailed;
  }
  std::ifstream in(o.reports);
  if (!in) throw ParameterError("cannot open '" + o.reports + "'");
  std::string line;
  std::size_t count = 0, mismatches = 0;
  double worst = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParameterError("line " + std::to_string(count + 1) + " is not JSON: " + e.what());
    }
    const auto recorded = report_from_json(j);
    const auto replayed = replay_report(j);
    const double gap = report_gap(recorded, replayed);
    worst = std::max(worst, gap);
    if (gap > 1e-9) ++mismatches;
    ++count;
  }
  std::cout << json{{"reports", count}, {"mismatches", mismatches}, {"max_relative_gap", number_to_json(worst)}}.dump(2)
            << '\n';
  return mismatches == 0 ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Martingale variation toolkit"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--threads", o.threads, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);

  std::string gen_what;
  auto* gen = app.add_subcommand("generate", "Write a filtration, martingale or weight as JSON");
  gen->add_option("kind", gen_what, "filtration | martingale | weight")->required()
      ->check(CLI::IsMember({"filtration", "martingale", "weight"}));
  gen->add_option("--filtration-kind", o.kind, "dyadic | comb | random")->check(CLI::IsMember({"dyadic", "comb", "random"}));
  gen->add_option("--depth", o.depth);
  gen->add_option("--cells", o.cells, "Cell count for random filtrations");
  gen->add_option("--q-min", o.q_min);
  gen->add_option("--q-max", o.q_max);
  gen->add_option("--gen", o.generator, "terminal_gaussian | uniform_terminal | dyadic_rademacher | reflecting");
  gen->add_option("--scale", o.scale);
  gen->add_option("--schedule", o.schedule, "Rademacher step sizes t_1..t_N")->delimiter(',');
  gen->add_option("--filtration", o.filtration_in, "Existing filtration JSON");
  gen->add_option("--rho", o.rho);
  gen->add_option("--seed", o.seed);
  gen->add_option("--out,-o", o.out);

  auto* compute = app.add_subcommand("compute", "Pointwise operators of a martingale or a path");
  compute->add_option("operator", o.op, "M | S | s | Vr | Njump | majorant")->required()
      ->check(CLI::IsMember({"M", "S", "s", "Vr", "Njump", "majorant"}));
  compute->add_option("--in,-i", o.input)->required();
  compute->add_option("--r", o.r);
  compute->add_option("--lambda", o.lambda);
  compute->add_option("--tolerance", o.tolerance, "Tail tolerance of the majorant");
  compute->add_option("--out,-o", o.out, "Output file (.csv for a per-cell table)");

  auto* verify = app.add_subcommand("verify", "Run a verification suite and write JSON-lines reports");
  verify->add_option("--suite", o.suite)->required()
      ->check(CLI::IsMember({"good_lambda", "lemma", "proof_chain", "weighted", "lepingle", "jumps", "bdg"}));
  verify->add_option("--config,-c", o.config);
  verify->add_option("--trials", o.trials);
  verify->add_option("--seed", o.seed);
  verify->add_option("--out,-o", o.out, "JSON-lines report file");

  auto* search = app.add_subcommand("search", "Adversarial search for large empirical constants");
  search->add_option("--objective", o.objective)->required()
      ->check(CLI::IsMember({"good_lambda_constant", "lepingle_ratio", "jump_ratio"}));
  search->add_option("--budget", o.budget)->check(CLI::PositiveNumber);
  search->add_option("--seed", o.seed);
  search->add_option("--config,-c", o.config, "Suite config supplying filtration, generators and parameters");
  search->add_option("--r-grid", o.r_grid, "lepingle_ratio only: search at each r and cross-evaluate")->delimiter(',');
  search->add_option("--out,-o", o.out);

  auto* replay = app.add_subcommand("replay", "Recompute reports or a search result from their manifests");
  auto* rep_opt = replay->add_option("--reports", o.reports, "JSON-lines report file");
  auto* search_opt = replay->add_option("--search", o.search_result, "Search result JSON");
  rep_opt->excludes(search_opt);
  replay->require_option(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) return cmd_generate(gen_what, o);
    if (*compute) return cmd_compute(o);
    if (*verify) return cmd_verify(o);
    if (*search) return cmd_search(o);
    if (*replay) return cmd_replay(o);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
