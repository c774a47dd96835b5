#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mgvar/report.hpp"
#include "mgvar/suite.hpp"

namespace mgvar {

enum class Objective { good_lambda_constant, lepingle_ratio, jump_ratio };

std::string to_string(Objective objective);
Objective objective_from_string(const std::string& name);

/// Trials come from the suite's filtration and generators; delta[0], r[0],
/// p and the jump lambda grid parameterize the objective.
struct SearchParams {
  Objective objective = Objective::lepingle_ratio;
  SuiteConfig suite;
};

struct Perturbation {
  std::size_t cell = 0;
  double delta = 0.0;
};

struct SearchResult {
  double best_objective = 0.0;
  std::size_t evaluations = 0;
  std::size_t restarts = 0;
  std::size_t best_restart = 0;  // trial index on the seed stream
  std::uint64_t seed = 0;
  std::vector<Perturbation> trace;  // accepted terminal-value moves, in order
  json manifest;                    // everything replay needs
};

/// Random restarts on trials 0..restarts-1 of `seed` (the same stream a
/// suite with that seed uses), then coordinate hill climbing on the terminal
/// values of the best restart.  restarts defaults to max(1, budget / 2); the
/// remaining evaluations go to hill climbing.  Deterministic given the inputs.
SearchResult adversarial_search(const SearchParams& params, std::size_t budget, std::uint64_t seed,
                                std::size_t restarts = 0);

/// Objective of the martingale described by a manifest.
double replay_search(const json& manifest);

/// Objective value of a single martingale.
double evaluate_objective(const SearchParams& params, const Martingale& f);

/// Martingale described by a search manifest.
Martingale manifest_martingale(const json& manifest);

json to_json(const SearchResult& result);

/// One search per r, then every best manifest evaluated at every r; the
/// reported value at r is the max over manifests, which is nonincreasing
/// in r because each path's V_r is.
struct RGridResult {
  std::vector<double> r;
  std::vector<SearchResult> searches;
  std::vector<double> max_ratio;
  bool nonincreasing = true;
};

RGridResult lepingle_r_grid(const SearchParams& params, std::span<const double> r_grid, std::size_t budget,
                            std::uint64_t seed);

json to_json(const RGridResult& result);

}  // namespace mgvar
