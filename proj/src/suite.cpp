#include "mgvar/suite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "mgvar/errors.hpp"
#include "mgvar/inequalities.hpp"
#include "mgvar/operators.hpp"
#include "mgvar/rng.hpp"
#include "mgvar/stopping.hpp"

namespace mgvar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<std::pair<SuiteKind, const char*>> kSuiteNames = {
    {SuiteKind::good_lambda, "good_lambda"}, {SuiteKind::lemma, "lemma"},     {SuiteKind::proof_chain, "proof_chain"},
    {SuiteKind::weighted, "weighted"},       {SuiteKind::lepingle, "lepingle"}, {SuiteKind::jumps, "jumps"},
    {SuiteKind::bdg, "bdg"},
};

std::vector<double> number_or_list(const json& j, const char* key) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array() || j.empty()) throw ParameterError(std::string("'") + key + "' must be a number or a nonempty array");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw ParameterError(std::string("'") + key + "' must contain numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

GeneratorSpec generator_from_json(const json& j) {
  GeneratorSpec spec;
  if (j.is_string()) {
    spec.kind = generator_from_string(j.get<std::string>());
    return spec;
  }
  if (!j.is_object()) throw ParameterError("generator entries must be strings or objects");
  static const std::set<std::string> known = {"kind", "scale_min", "scale_max", "scale", "schedule", "amplitude_floor"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ParameterError("unknown generator key '" + key + "'");
  }
  spec.kind = generator_from_string(j.at("kind").get<std::string>());
  if (j.contains("scale")) spec.scale_min = spec.scale_max = j.at("scale").get<double>();
  if (j.contains("scale_min")) spec.scale_min = j.at("scale_min").get<double>();
  if (j.contains("scale_max")) spec.scale_max = j.at("scale_max").get<double>();
  if (j.contains("schedule")) spec.schedule = j.at("schedule").get<std::vector<double>>();
  if (j.contains("amplitude_floor")) spec.amplitude_floor = j.at("amplitude_floor").get<double>();
  if (!(spec.scale_min > 0.0) || spec.scale_max < spec.scale_min) {
    throw ParameterError("generator scale range needs 0 < scale_min <= scale_max");
  }
  return spec;
}

json generator_to_json(const GeneratorSpec& spec) {
  json j = {{"kind", to_string(spec.kind)}, {"scale_min", spec.scale_min}, {"scale_max", spec.scale_max}};
  if (!spec.schedule.empty()) j["schedule"] = spec.schedule;
  if (spec.kind == GeneratorKind::reflecting) j["amplitude_floor"] = spec.amplitude_floor;
  return j;
}

std::string filtration_kind_name(FiltrationSpec::Kind kind) {
  switch (kind) {
    case FiltrationSpec::Kind::dyadic: return "dyadic";
    case FiltrationSpec::Kind::comb: return "comb";
    case FiltrationSpec::Kind::random: return "random";
  }
  return "dyadic";
}

std::uint64_t seed_from_json(const json& j, const char* key) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  throw ParameterError(std::string("'") + key + "' must be a nonnegative integer");
}

std::vector<double> jump_grid(const SuiteConfig& config, const Martingale& f) {
  if (!config.lambdas.empty()) return config.lambdas;
  double top = 0.0;
  for (double x : f.level(f.depth())) top = std::max(top, std::fabs(x));
  if (top == 0.0) top = 1.0;
  return {0.05 * top, 0.1 * top, 0.25 * top, 0.5 * top, top};
}

std::vector<double> lambda_grid(const SuiteConfig& config, std::span<const double> V, const Filtration& filt) {
  if (config.lambda_mode == LambdaMode::fixed) return config.lambdas;
  return quantile_grid(V, filt, config.quantiles);
}

}  // namespace

std::string to_string(SuiteKind kind) {
  for (const auto& [k, name] : kSuiteNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

SuiteKind suite_from_string(const std::string& name) {
  for (const auto& [k, n] : kSuiteNames) {
    if (name == n) return k;
  }
  throw ParameterError("unknown suite '" + name + "'");
}

bool is_calibrated(SuiteKind kind) {
  return kind == SuiteKind::good_lambda || kind == SuiteKind::lemma || kind == SuiteKind::weighted;
}

SuiteConfig suite_config_from_json(const json& j) {
  if (!j.is_object()) throw ParameterError("suite config must be a JSON object");
  static const std::set<std::string> known = {
      "suite",  "trials",   "seed",      "holdout_seed", "filtration",     "generators", "generator",
      "delta",  "r",        "lambda_grid", "quantiles",  "budget",         "epsilon",    "rho",
      "lemma_constant", "p", "threads"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ParameterError("unknown config key '" + key + "'");
  }
  SuiteConfig c;
  try {
    if (j.contains("suite")) c.suite = suite_from_string(j.at("suite").get<std::string>());
    if (j.contains("trials")) {
      const auto& t = j.at("trials");
      if (!t.is_number_integer() || t.get<std::int64_t>() < 1) throw ParameterError("'trials' must be a positive integer");
      c.trials = t.get<std::size_t>();
    }
    if (j.contains("seed")) c.seed = seed_from_json(j.at("seed"), "seed");
    if (j.contains("holdout_seed")) c.holdout_seed = seed_from_json(j.at("holdout_seed"), "holdout_seed");
    if (j.contains("filtration")) {
      const auto& fj = j.at("filtration");
      static const std::set<std::string> fkeys = {"kind", "depth", "cells", "q_min", "q_max"};
      for (const auto& [key, value] : fj.items()) {
        if (!fkeys.count(key)) throw ParameterError("unknown filtration key '" + key + "'");
      }
      if (fj.contains("kind")) {
        const auto kind = fj.at("kind").get<std::string>();
        if (kind == "dyadic") c.filtration.kind = FiltrationSpec::Kind::dyadic;
        else if (kind == "comb") c.filtration.kind = FiltrationSpec::Kind::comb;
        else if (kind == "random") c.filtration.kind = FiltrationSpec::Kind::random;
        else throw ParameterError("unknown filtration kind '" + kind + "'");
      }
      if (fj.contains("depth")) c.filtration.depth = fj.at("depth").get<int>();
      if (fj.contains("cells")) c.filtration.cells = fj.at("cells").get<std::size_t>();
      if (fj.contains("q_min")) c.filtration.q_min = fj.at("q_min").get<double>();
      if (fj.contains("q_max")) c.filtration.q_max = fj.at("q_max").get<double>();
    }
    if (j.contains("generators") && j.contains("generator")) {
      throw ParameterError("give either 'generator' or 'generators'");
    }
    if (j.contains("generator")) c.generators = {generator_from_json(j.at("generator"))};
    if (j.contains("generators")) {
      const auto& gj = j.at("generators");
      if (!gj.is_array() || gj.empty()) throw ParameterError("'generators' must be a nonempty array");
      c.generators.clear();
      for (const auto& g : gj) c.generators.push_back(generator_from_json(g));
    }
    if (j.contains("delta")) c.delta = number_or_list(j.at("delta"), "delta");
    if (j.contains("r")) c.r = number_or_list(j.at("r"), "r");
    if (j.contains("lambda_grid")) {
      const auto& lj = j.at("lambda_grid");
      if (lj.is_string()) {
        const auto mode = lj.get<std::string>();
        if (mode == "critical") c.lambda_mode = LambdaMode::critical;
        else if (mode == "quantile") c.lambda_mode = LambdaMode::quantile;
        else throw ParameterError("lambda_grid must be 'critical', 'quantile' or a list");
      } else {
        c.lambda_mode = LambdaMode::fixed;
        c.lambdas = number_or_list(lj, "lambda_grid");
      }
    }
    if (j.contains("quantiles")) c.quantiles = number_or_list(j.at("quantiles"), "quantiles");
    if (j.contains("budget") && !j.at("budget").is_null()) c.budget = number_from_json(j.at("budget"));
    if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
    if (j.contains("rho")) c.rho = j.at("rho").get<double>();
    if (j.contains("lemma_constant")) c.lemma_constant = j.at("lemma_constant").get<double>();
    if (j.contains("p")) c.p = j.at("p").get<double>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed suite config: ") + e.what());
  }

  const auto& fs = c.filtration;
  const int max_depth = fs.kind == FiltrationSpec::Kind::comb ? 4096 : 24;
  if (fs.depth < 0 || fs.depth > max_depth) {
    throw ParameterError("filtration depth must lie in [0, " + std::to_string(max_depth) + "]");
  }
  if (fs.kind == FiltrationSpec::Kind::comb && !(fs.q_min > 0.0 && fs.q_min <= fs.q_max && fs.q_max < 1.0)) {
    throw ParameterError("comb filtration needs 0 < q_min <= q_max < 1");
  }
  if (fs.kind == FiltrationSpec::Kind::random && fs.cells < 1) throw ParameterError("random filtration needs cells >= 1");
  for (double d : c.delta) {
    if (!(d > 0.0 && d < 0.5)) throw ParameterError("delta values must lie in (0, 1/2)");
  }
  for (double r : c.r) {
    if (!(r > 2.0) || !std::isfinite(r)) throw ParameterError("r values must be finite and > 2");
  }
  for (double q : c.quantiles) {
    if (!(q > 0.0 && q < 1.0)) throw ParameterError("quantiles must lie in (0, 1)");
  }
  for (double l : c.lambdas) {
    if (!(l > 0.0) || !std::isfinite(l)) throw ParameterError("lambda values must be positive and finite");
  }
  if (c.budget && !(*c.budget >= 0.0)) throw ParameterError("budget must be >= 0");
  if (!(c.epsilon > 0.0 && c.epsilon <= 1.0)) throw ParameterError("epsilon must lie in (0, 1]");
  if (!(c.rho >= 0.0 && c.rho < 1.0)) throw ParameterError("rho must lie in [0, 1)");
  if (!(c.lemma_constant > 0.0)) throw ParameterError("lemma_constant must be positive");
  if (!(c.p >= 1.0) || !std::isfinite(c.p)) throw ParameterError("p must be finite and >= 1");
  if (c.threads < 1) throw ParameterError("threads must be >= 1");
  if (c.suite == SuiteKind::weighted && fs.kind != FiltrationSpec::Kind::dyadic) {
    throw ParameterError("the weighted suite needs the dyadic filtration");
  }
  return c;
}

json to_json(const SuiteConfig& c) {
  json gens = json::array();
  for (const auto& g : c.generators) gens.push_back(generator_to_json(g));
  json filt = {{"kind", filtration_kind_name(c.filtration.kind)}, {"depth", c.filtration.depth}};
  if (c.filtration.kind == FiltrationSpec::Kind::random) filt["cells"] = c.filtration.cells;
  if (c.filtration.kind == FiltrationSpec::Kind::comb) {
    filt["q_min"] = c.filtration.q_min;
    filt["q_max"] = c.filtration.q_max;
  }
  json j = {{"suite", to_string(c.suite)},
            {"trials", c.trials},
            {"seed", c.seed},
            {"holdout_seed", c.holdout_seed},
            {"filtration", filt},
            {"generators", gens},
            {"delta", c.delta},
            {"r", c.r},
            {"quantiles", c.quantiles},
            {"epsilon", c.epsilon},
            {"rho", c.rho},
            {"lemma_constant", c.lemma_constant},
            {"p", c.p}};
  switch (c.lambda_mode) {
    case LambdaMode::critical: j["lambda_grid"] = "critical"; break;
    case LambdaMode::quantile: j["lambda_grid"] = "quantile"; break;
    case LambdaMode::fixed: j["lambda_grid"] = c.lambdas; break;
  }
  j["budget"] = c.budget ? number_to_json(*c.budget) : json(nullptr);
  return j;
}

TrialFactory::TrialFactory(SuiteConfig config) : config_(std::move(config)) {
  if (config_.generators.empty()) throw ParameterError("a suite needs at least one generator");
  if (config_.filtration.kind == FiltrationSpec::Kind::dyadic) {
    shared_ = std::make_shared<const Filtration>(Filtration::dyadic(config_.filtration.depth));
  }
  // Surface generator/filtration mismatches before any trial runs.
  for (std::size_t g = 0; g < config_.generators.size(); ++g) make(config_.seed, g);
}

Trial TrialFactory::make(std::uint64_t base_seed, std::size_t index) const {
  Trial t;
  t.index = index;
  t.seed = trial_seed(base_seed, index);
  const auto& fs = config_.filtration;
  switch (fs.kind) {
    case FiltrationSpec::Kind::dyadic: t.filtration = shared_; break;
    case FiltrationSpec::Kind::comb:
      t.filtration = std::make_shared<const Filtration>(
          comb_filtration(fs.depth, fs.q_min, fs.q_max, trial_seed(t.seed, 1)));
      break;
    case FiltrationSpec::Kind::random:
      t.filtration = std::make_shared<const Filtration>(random_filtration(fs.depth, fs.cells, trial_seed(t.seed, 1)));
      break;
  }
  const auto& gen = config_.generators[index % config_.generators.size()];
  t.f.emplace(random_martingale(t.filtration, gen, trial_seed(t.seed, 0)));
  if (config_.suite == SuiteKind::weighted) t.weight.emplace(cascade_weight(fs.depth, config_.rho, trial_seed(t.seed, 2)));
  return t;
}

TrialOutcome evaluate_trial(const TrialFactory& factory, std::uint64_t base_seed, std::size_t index, double budget) {
  const auto& config = factory.config();
  const Trial trial = factory.make(base_seed, index);
  const Martingale& f = *trial.f;
  const auto& filt = *trial.filtration;
  TrialOutcome out;
  out.index = index;
  auto& reports = out.reports;

  // K-form budgets become the verifier multiplier C = 1 / budget.
  const double c_from_k = budget > 0.0 ? 1.0 / budget : kInf;

  switch (config.suite) {
    case SuiteKind::good_lambda: {
      for (double r : config.r) {
        const auto fields = operator_fields(f, r);
        for (double delta : config.delta) {
          if (config.lambda_mode == LambdaMode::critical) {
            const auto sup = good_lambda_sup(filt, fields, delta);
            auto rep = verify_good_lambda(filt, fields, delta, sup.lambda, c_from_k);
            rep.params["candidates"] = double(sup.candidates);
            reports.push_back(std::move(rep));
          } else {
            for (double lambda : lambda_grid(config, fields.V, filt)) {
              reports.push_back(verify_good_lambda(filt, fields, delta, lambda, c_from_k));
            }
          }
        }
      }
      break;
    }
    case SuiteKind::lemma: {
      for (double r : config.r) {
        const auto prefix = prefix_variation_table(f, r);
        const auto sigma = first_variation_exceed(filt, prefix, 1.0);
        const Martingale g = stopped_tail(f, sigma);
        OperatorFields fields;
        fields.r = r;
        fields.V = variation_pointwise(g, r);
        fields.M = maximal(g);
        for (int m = 0; m <= filt.depth(); ++m) {
          const CellSet A = sigma.at(m);
          if (A.none()) continue;
          for (double delta : config.delta) {
            std::vector<double> grid;
            if (config.lambda_mode == LambdaMode::critical) {
              // Candidates: left ends M/delta and predecessors of right ends V of the
              // per-cell intervals M/delta <= lambda < V; evaluate each exactly.
              for (std::size_t c : A.members()) {
                const double lo = fields.M[c] / delta;
                const double hi = fields.V[c];
                if (lo < hi) {
                  if (lo > 0.0) grid.push_back(lo);
                  grid.push_back(std::nextafter(hi, 0.0));
                }
              }
              std::sort(grid.begin(), grid.end());
              grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
              std::optional<VerificationReport> best;
              for (double lambda : grid) {
                if (!(lambda > 0.0)) continue;
                auto rep = verify_lemma_weak(g, fields, A, m, lambda, delta, c_from_k);
                if (!best || rep.empirical_constant > best->empirical_constant) best = std::move(rep);
              }
              if (!best) best = verify_lemma_weak(g, fields, A, m, 1.0, delta, c_from_k);
              best->params["candidates"] = double(grid.size());
              reports.push_back(std::move(*best));
            } else {
              for (double lambda : lambda_grid(config, fields.V, filt)) {
                reports.push_back(verify_lemma_weak(g, fields, A, m, lambda, delta, c_from_k));
              }
            }
          }
        }
      }
      break;
    }
    case SuiteKind::proof_chain: {
      for (double r : config.r) {
        const auto inputs = proof_chain_inputs(f, r);
        for (double delta : config.delta) {
          for (auto& rep : verify_proof_chain(inputs, delta)) reports.push_back(std::move(rep));
        }
      }
      break;
    }
    case SuiteKind::weighted: {
      const auto& w = *trial.weight;
      const auto profile = ainfty_profile(w, filt, default_gamma_grid(filt.depth()));
      for (double r : config.r) {
        const auto admissible = admissible_delta(profile, config.epsilon, r, config.lemma_constant);
        if (!admissible) {
          VerificationReport rep;
          rep.name = "weighted_good_lambda";
          rep.params = {{"r", r}, {"epsilon", config.epsilon}, {"admissible", 0.0}};
          reports.push_back(std::move(rep));
          continue;
        }
        const auto V = variation_pointwise(f, r);
        std::vector<double> grid = config.lambda_mode == LambdaMode::fixed ? config.lambdas
                                                                           : quantile_grid(V, filt, config.quantiles);
        for (double lambda : grid) {
          auto rep = verify_weighted_good_lambda(f, w, admissible->delta, config.epsilon, r, lambda, budget,
                                                 config.lemma_constant);
          rep.params["gamma"] = admissible->gamma;
          rep.params["admissible"] = 1.0;
          reports.push_back(std::move(rep));
        }
      }
      break;
    }
    case SuiteKind::lepingle:
    case SuiteKind::jumps:
    case SuiteKind::bdg: {
      // Zero martingales carry no information; for bdg the same holds for constant ones (S = s = 0).
      const auto S = config.suite == SuiteKind::bdg ? square(f) : PointwiseField{};
      const bool constant = config.suite == SuiteKind::bdg &&
                            std::all_of(S.begin(), S.end(), [](double x) { return x == 0.0; });
      if (f.identically_zero() || constant) {
        out.excluded = true;
        break;
      }
      if (config.suite == SuiteKind::lepingle) {
        for (double r : config.r) reports.push_back(lepingle_ratio(f, config.p, r));
      } else if (config.suite == SuiteKind::jumps) {
        const auto grid = jump_grid(config, f);
        reports.push_back(jump_ratio(f, config.p, grid));
      } else {
        for (auto& rep : bdg_ratios(f, config.p)) reports.push_back(std::move(rep));
      }
      break;
    }
  }

  const json suite_json = to_json(config);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    auto& rep = reports[i];
    rep.params["depth"] = filt.depth();
    rep.params["trial"] = double(index);
    rep.manifest = {{"command", "verify"},
                    {"suite", suite_json},
                    {"seed", base_seed},
                    {"trial", index},
                    {"trial_seed", trial.seed},
                    {"generator", generator_to_json(config.generators[index % config.generators.size()])},
                    {"index", i},
                    {"budget", number_to_json(budget)},
                    {"version", kVersion}};
  }
  return out;
}

namespace {

constexpr std::size_t kChunk = 64;

template <class Visit>
void run_trials(const TrialFactory& factory, std::uint64_t seed, double budget, Visit visit) {
  const auto& config = factory.config();
  for (std::size_t start = 0; start < config.trials; start += kChunk) {
    const std::size_t count = std::min(kChunk, config.trials - start);
    auto outcomes = parallel_map(count, config.threads,
                                 [&](std::size_t i) { return evaluate_trial(factory, seed, start + i, budget); });
    for (const auto& outcome : outcomes) visit(outcome);
  }
}

std::string stat_key(const SuiteConfig& config, const VerificationReport& rep) {
  if (config.suite == SuiteKind::lepingle && config.r.size() > 1) {
    std::ostringstream os;
    os << rep.name << "@r=" << rep.params.at("r");
    return os.str();
  }
  return rep.name;
}

}  // namespace

Calibration calibrate(const SuiteConfig& config, std::uint64_t seed) {
  if (!is_calibrated(config.suite)) throw ParameterError("suite '" + to_string(config.suite) + "' is not calibrated");
  const TrialFactory factory(config);
  Calibration cal;
  cal.seed = seed;
  cal.trials = config.trials;
  // Calibration ignores pass/fail: K-form verifiers get C = 0 and the weighted one C = +inf.
  run_trials(factory, seed, kInf, [&](const TrialOutcome& outcome) {
    for (const auto& rep : outcome.reports) cal.sup_constant = std::max(cal.sup_constant, rep.empirical_constant);
  });
  cal.budget = cal.sup_constant;
  return cal;
}

SuiteResult run_suite(const SuiteConfig& config, const ReportSink& sink) {
  SuiteResult result;
  std::uint64_t seed = config.seed;
  double budget = kInf;
  if (is_calibrated(config.suite)) {
    if (config.budget) {
      budget = *config.budget;
    } else {
      result.calibration = calibrate(config, config.seed);
      budget = result.calibration->budget;
      seed = config.holdout_seed;
    }
  }
  const TrialFactory factory(config);
  run_trials(factory, seed, budget, [&](const TrialOutcome& outcome) {
    ++result.trials;
    if (outcome.excluded) ++result.excluded;
    for (const auto& rep : outcome.reports) {
      ++result.reports;
      auto& st = result.stats[stat_key(config, rep)];
      ++st.count;
      if (!rep.pass) {
        ++st.failures;
        ++result.failures;
      }
      if (rep.lhs > 0.0) ++st.nonvacuous;
      st.max_constant = std::max(st.max_constant, rep.empirical_constant);
    }
    if (sink) sink(outcome);
  });

  json summary = {{"suite", to_string(config.suite)},
                  {"seed", seed},
                  {"trials", result.trials},
                  {"excluded", result.excluded},
                  {"reports", result.reports},
                  {"failures", result.failures},
                  {"budget", number_to_json(budget)}};
  if (config.suite == SuiteKind::lepingle) {
    GrowthCurve curve;
    std::vector<double> rs = config.r;
    std::sort(rs.begin(), rs.end());
    for (double r : rs) {
      curve.r.push_back(r);
      double best = 0.0;
      for (const auto& [key, st] : result.stats) {
        std::ostringstream os;
        os << "lepingle@r=" << r;
        if (key == os.str() || (config.r.size() == 1 && key == "lepingle")) best = st.max_constant;
      }
      curve.max_ratio.push_back(best);
    }
    double xy = 0.0, xx = 0.0;
    for (std::size_t i = 0; i < curve.r.size(); ++i) {
      const double x = curve.r[i] / (curve.r[i] - 2.0);
      xy += x * curve.max_ratio[i];
      xx += x * x;
      if (i > 0 && curve.max_ratio[i] > curve.max_ratio[i - 1] * (1.0 + 1e-9)) curve.nonincreasing = false;
    }
    curve.coefficient = xx > 0.0 ? xy / xx : 0.0;
    summary["growth"] = to_json(curve);
  }
  result.summary = std::move(summary);
  return result;
}

json to_json(const SuiteResult& result) {
  json stats = json::object();
  for (const auto& [key, st] : result.stats) {
    stats[key] = {{"count", st.count},
                  {"failures", st.failures},
                  {"nonvacuous", st.nonvacuous},
                  {"max_constant", number_to_json(st.max_constant)}};
  }
  json j = result.summary;
  j["stats"] = stats;
  j["version"] = kVersion;
  if (result.calibration) {
    j["calibration"] = {{"seed", result.calibration->seed},
                        {"trials", result.calibration->trials},
                        {"sup_constant", number_to_json(result.calibration->sup_constant)},
                        {"budget", number_to_json(result.calibration->budget)}};
  }
  return j;
}

VerificationReport replay_report(const json& report) {
  SuiteConfig config;
  std::uint64_t seed = 0;
  std::size_t trial = 0, index = 0;
  double budget = 0.0;
  try {
    const auto& manifest = report.at("manifest");
    config = suite_config_from_json(manifest.at("suite"));
    seed = manifest.at("seed").get<std::uint64_t>();
    trial = manifest.at("trial").get<std::size_t>();
    index = manifest.at("index").get<std::size_t>();
    budget = number_from_json(manifest.at("budget"));
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed report manifest: ") + e.what());
  }
  config.threads = 1;
  const TrialFactory factory(config);
  auto outcome = evaluate_trial(factory, seed, trial, budget);
  if (index >= outcome.reports.size()) throw ContractError("manifest index out of range on replay");
  return std::move(outcome.reports[index]);
}

double report_gap(const VerificationReport& a, const VerificationReport& b) {
  if (a.name != b.name || a.pass != b.pass) return kInf;
  double gap = std::max({relative_gap(a.lhs, b.lhs), relative_gap(a.rhs, b.rhs),
                         relative_gap(a.empirical_constant, b.empirical_constant)});
  for (const auto& [key, value] : a.params) {
    const auto it = b.params.find(key);
    if (it != b.params.end()) gap = std::max(gap, relative_gap(value, it->second));
  }
  return gap;
}

}  // namespace mgvar
