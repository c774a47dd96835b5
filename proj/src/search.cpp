#include "mgvar/search.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mgvar/errors.hpp"
#include "mgvar/inequalities.hpp"
#include "mgvar/rng.hpp"

namespace mgvar {

std::string to_string(Objective objective) {
  switch (objective) {
    case Objective::good_lambda_constant: return "good_lambda_constant";
    case Objective::lepingle_ratio: return "lepingle_ratio";
    case Objective::jump_ratio: return "jump_ratio";
  }
  return "unknown";
}

Objective objective_from_string(const std::string& name) {
  if (name == "good_lambda_constant") return Objective::good_lambda_constant;
  if (name == "lepingle_ratio") return Objective::lepingle_ratio;
  if (name == "jump_ratio") return Objective::jump_ratio;
  throw ParameterError("unknown objective '" + name + "'");
}

double evaluate_objective(const SearchParams& params, const Martingale& f) {
  if (f.identically_zero()) return 0.0;
  const auto& cfg = params.suite;
  switch (params.objective) {
    case Objective::good_lambda_constant: {
      const auto fields = operator_fields(f, cfg.r.front());
      return good_lambda_sup(f.filtration(), fields, cfg.delta.front()).constant;
    }
    case Objective::lepingle_ratio:
      return lepingle_ratio(f, cfg.p, cfg.r.front()).empirical_constant;
    case Objective::jump_ratio: {
      std::vector<double> grid = cfg.lambdas;
      if (grid.empty()) {
        double top = 0.0;
        for (double x : f.level(f.depth())) top = std::max(top, std::fabs(x));
        grid = {0.05 * top, 0.1 * top, 0.25 * top, 0.5 * top, top};
      }
      return jump_ratio(f, cfg.p, grid).empirical_constant;
    }
  }
  return 0.0;
}

namespace {

json trace_to_json(const std::vector<Perturbation>& trace) {
  json out = json::array();
  for (const auto& p : trace) out.push_back(json::array({p.cell, p.delta}));
  return out;
}

Martingale apply_trace(const Martingale& start, const std::vector<Perturbation>& trace) {
  if (trace.empty()) return start;
  auto terminal = terminal_field(start);
  for (const auto& p : trace) {
    if (p.cell >= terminal.size()) throw ParameterError("perturbation cell out of range");
    terminal[p.cell] += p.delta;
  }
  return from_terminal(start.filtration_ptr(), terminal);
}

json make_manifest(const SearchParams& params, std::uint64_t seed, std::size_t trial,
                   const std::vector<Perturbation>& trace) {
  return {{"command", "search"},
          {"objective", to_string(params.objective)},
          {"suite", to_json(params.suite)},
          {"seed", seed},
          {"trial", trial},
          {"trace", trace_to_json(trace)},
          {"version", kVersion}};
}

}  // namespace

SearchResult adversarial_search(const SearchParams& params, std::size_t budget, std::uint64_t seed,
                                std::size_t restarts) {
  if (budget < 1) throw ParameterError("search budget must be >= 1");
  if (restarts == 0) restarts = std::max<std::size_t>(1, budget / 2);
  restarts = std::min(restarts, budget);
  const TrialFactory factory(params.suite);

  const auto values = parallel_map(restarts, params.suite.threads, [&](std::size_t t) {
    const Trial trial = factory.make(seed, t);
    return evaluate_objective(params, *trial.f);
  });
  SearchResult result;
  result.seed = seed;
  result.restarts = restarts;
  result.evaluations = restarts;
  result.best_objective = values.front();
  for (std::size_t t = 1; t < values.size(); ++t) {
    if (values[t] > result.best_objective) {
      result.best_objective = values[t];
      result.best_restart = t;
    }
  }

  const Trial start = factory.make(seed, result.best_restart);
  auto terminal = terminal_field(*start.f);
  double top = 0.0;
  for (double x : terminal) top = std::max(top, std::fabs(x));
  double step = 0.25 * (top > 0.0 ? top : 1.0);
  std::mt19937_64 rng(splitmix64(seed ^ 0x5EA4C4ULL));
  std::uniform_int_distribution<std::size_t> pick(0, terminal.size() - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::size_t misses = 0;
  while (result.evaluations < budget) {
    const Perturbation move{pick(rng), step * normal(rng)};
    auto candidate = terminal;
    candidate[move.cell] += move.delta;
    const double value = evaluate_objective(params, from_terminal(start.filtration, candidate));
    ++result.evaluations;
    if (value > result.best_objective) {
      result.best_objective = value;
      result.trace.push_back(move);
      terminal = std::move(candidate);
      misses = 0;
    } else if (++misses >= 32) {
      step *= 0.5;
      misses = 0;
    }
  }
  result.manifest = make_manifest(params, seed, result.best_restart, result.trace);
  return result;
}

Martingale manifest_martingale(const json& manifest) {
  try {
    auto config = suite_config_from_json(manifest.at("suite"));
    config.threads = 1;
    const TrialFactory factory(config);
    const Trial trial = factory.make(manifest.at("seed").get<std::uint64_t>(), manifest.at("trial").get<std::size_t>());
    std::vector<Perturbation> trace;
    for (const auto& step : manifest.at("trace")) {
      trace.push_back({step.at(0).get<std::size_t>(), step.at(1).get<double>()});
    }
    return apply_trace(*trial.f, trace);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed search manifest: ") + e.what());
  }
}

double replay_search(const json& manifest) {
  SearchParams params;
  try {
    params.objective = objective_from_string(manifest.at("objective").get<std::string>());
    params.suite = suite_config_from_json(manifest.at("suite"));
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed search manifest: ") + e.what());
  }
  return evaluate_objective(params, manifest_martingale(manifest));
}

json to_json(const SearchResult& result) {
  return {{"best_objective", number_to_json(result.best_objective)},
          {"evaluations", result.evaluations},
          {"restarts", result.restarts},
          {"best_restart", result.best_restart},
          {"seed", result.seed},
          {"martingale_manifest", result.manifest},
          {"version", kVersion}};
}

RGridResult lepingle_r_grid(const SearchParams& params, std::span<const double> r_grid, std::size_t budget,
                            std::uint64_t seed) {
  if (params.objective != Objective::lepingle_ratio) throw ParameterError("the r grid applies to lepingle_ratio");
  RGridResult out;
  out.r.assign(r_grid.begin(), r_grid.end());
  std::sort(out.r.begin(), out.r.end());
  std::vector<Martingale> best;
  for (double r : out.r) {
    SearchParams at_r = params;
    at_r.suite.r = {r};
    out.searches.push_back(adversarial_search(at_r, budget, seed));
    best.push_back(manifest_martingale(out.searches.back().manifest));
  }
  for (double r : out.r) {
    double top = 0.0;
    for (const auto& f : best) {
      if (!f.identically_zero()) top = std::max(top, lepingle_ratio(f, params.suite.p, r).empirical_constant);
    }
    out.max_ratio.push_back(top);
  }
  for (std::size_t i = 1; i < out.max_ratio.size(); ++i) {
    if (out.max_ratio[i] > out.max_ratio[i - 1] * (1.0 + 1e-9)) out.nonincreasing = false;
  }
  return out;
}

json to_json(const RGridResult& result) {
  json searches = json::array();
  for (const auto& s : result.searches) searches.push_back(to_json(s));
  json ratios = json::array();
  for (double x : result.max_ratio) ratios.push_back(number_to_json(x));
  return {{"r", result.r}, {"max_ratio", ratios}, {"nonincreasing", result.nonincreasing}, {"searches", searches},
          {"version", kVersion}};
}

}  // namespace mgvar
