#include "mgvar/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "mgvar/errors.hpp"
#include "mgvar/operators.hpp"
#include "mgvar/stopping.hpp"

namespace mgvar {

namespace {

void require_depth(int depth) {
  if (depth < 0 || depth > 24) throw ParameterError("weight depth must lie in [0, 24]");
}

void require_matching(const DyadicWeight& w, const Filtration& filtration) {
  if (!filtration.dyadic_layout() || filtration.depth() != w.depth()) {
    throw ParameterError("weights live on the dyadic filtration of the same depth");
  }
}

}  // namespace

DyadicWeight DyadicWeight::from_density(int depth, std::vector<double> density) {
  require_depth(depth);
  const std::size_t cells = std::size_t{1} << depth;
  if (density.size() != cells) throw ParameterError("density needs 2^depth entries");
  for (double d : density) {
    if (!(d > 0.0) || !std::isfinite(d)) throw ParameterError("weight densities must be positive and finite");
  }
  DyadicWeight w;
  w.depth_ = depth;
  w.density_ = std::move(density);
  w.mass_.resize(static_cast<std::size_t>(depth) + 1);
  auto& finest = w.mass_[depth];
  finest.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) finest[c] = std::ldexp(w.density_[c], -depth);
  for (int n = depth - 1; n >= 0; --n) {
    const auto& below = w.mass_[n + 1];
    auto& level = w.mass_[n];
    level.resize(below.size() / 2);
    for (std::size_t i = 0; i < level.size(); ++i) level[i] = below[2 * i] + below[2 * i + 1];
  }
  return w;
}

DyadicWeight DyadicWeight::from_cell_masses(int depth, std::span<const double> masses) {
  require_depth(depth);
  std::vector<double> density(masses.begin(), masses.end());
  for (double& d : density) d = std::ldexp(d, depth);
  return from_density(depth, std::move(density));
}

DyadicWeight lebesgue_weight(int depth) {
  require_depth(depth);
  return DyadicWeight::from_density(depth, std::vector<double>(std::size_t{1} << depth, 1.0));
}

DyadicWeight cascade_weight(int depth, double rho_max, std::uint64_t seed) {
  require_depth(depth);
  if (!(rho_max >= 0.0 && rho_max < 1.0)) throw ParameterError("rho_max must lie in [0, 1)");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rho(0.0, rho_max);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> level{1.0};
  for (int n = 0; n < depth; ++n) {
    std::vector<double> next(level.size() * 2);
    for (std::size_t i = 0; i < level.size(); ++i) {
      const double t = rho_max > 0.0 ? rho(rng) : 0.0;
      const double side = coin(rng) ? 1.0 : -1.0;
      next[2 * i] = level[i] * (1.0 + side * t);
      next[2 * i + 1] = level[i] * (1.0 - side * t);
    }
    level = std::move(next);
  }
  return DyadicWeight::from_density(depth, std::move(level));
}

double doubling_constant(const DyadicWeight& w, const Filtration& filtration) {
  require_matching(w, filtration);
  double worst = 1.0;
  for (int n = 1; n <= w.depth(); ++n) {
    const std::size_t count = std::size_t{1} << n;
    for (std::size_t i = 0; i < count; i += 2) {
      const double a = w.mass(n, i);
      const double b = w.mass(n, i + 1);
      worst = std::max(worst, std::max(a / b, b / a));
    }
  }
  return worst;
}

AInftyProfile ainfty_profile(const DyadicWeight& w, const Filtration& filtration,
                             std::span<const double> gamma_grid) {
  require_matching(w, filtration);
  for (double g : gamma_grid) {
    if (!(g > 0.0 && g < 1.0)) throw ParameterError("gamma values must lie in (0, 1)");
  }
  const int depth = w.depth();
  const auto cell_mass = w.cell_mass();
  AInftyProfile profile;
  profile.gamma.assign(gamma_grid.begin(), gamma_grid.end());
  profile.epsilon.assign(gamma_grid.size(), 0.0);

  // Cell masses sorted descending within each dyadic block, merged bottom-up.
  std::vector<double> sorted(cell_mass.begin(), cell_mass.end());
  std::vector<double> scratch(sorted.size());
  std::vector<double> prefix(sorted.size() + 1);
  for (int n = depth; n >= 0; --n) {
    const std::size_t block = std::size_t{1} << (depth - n);
    if (n < depth) {
      const std::size_t half = block / 2;
      for (std::size_t start = 0; start < sorted.size(); start += block) {
        std::merge(sorted.begin() + start, sorted.begin() + start + half, sorted.begin() + start + half,
                   sorted.begin() + start + block, scratch.begin() + start, std::greater<>());
      }
      sorted.swap(scratch);
    }
    // prefix[i] = sum of sorted[0..i) restarted at each block boundary.
    for (std::size_t start = 0; start < sorted.size(); start += block) {
      double acc = 0.0;
      for (std::size_t j = 0; j < block; ++j) {
        acc += sorted[start + j];
        prefix[start + j + 1] = acc;
      }
      const double total = w.mass(n, start / block);
      for (std::size_t gi = 0; gi < gamma_grid.size(); ++gi) {
        const auto k = static_cast<std::size_t>(std::floor(gamma_grid[gi] * double(block)));
        const double top = k == 0 ? 0.0 : prefix[start + k];
        profile.epsilon[gi] = std::max(profile.epsilon[gi], top / total);
      }
    }
  }
  return profile;
}

std::vector<double> default_gamma_grid(int depth) {
  require_depth(depth);
  std::vector<double> grid;
  const std::size_t cells = std::size_t{1} << depth;
  const std::size_t steps = cells <= 64 ? cells : 64;
  for (std::size_t k = 1; k < steps; ++k) grid.push_back(double(k) / double(steps));
  return grid;
}

double weighted_distribution(std::span<const double> field, const DyadicWeight& w, double threshold,
                             const CellSet* filter) {
  const auto mass = w.cell_mass();
  if (field.size() != mass.size()) throw ParameterError("field length does not match the weight");
  double total = 0.0;
  for (std::size_t c = 0; c < field.size(); ++c) {
    if (field[c] > threshold && (!filter || filter->contains(c))) total += mass[c];
  }
  return total;
}

std::optional<AdmissibleDelta> admissible_delta(const AInftyProfile& profile, double epsilon, double r,
                                                double lemma_constant) {
  if (!(r > 2.0)) throw ParameterError("r must be > 2");
  if (!(lemma_constant > 0.0)) throw ParameterError("lemma constant must be positive");
  std::optional<AdmissibleDelta> best;
  for (std::size_t i = 0; i < profile.gamma.size(); ++i) {
    if (profile.epsilon[i] <= epsilon && (!best || profile.gamma[i] > best->gamma)) {
      best = AdmissibleDelta{profile.gamma[i], 0.0};
    }
  }
  if (best) best->delta = std::min(std::sqrt(best->gamma * (r - 2.0) * (r - 2.0) / lemma_constant), 0.49);
  return best;
}

VerificationReport verify_weighted_good_lambda(const Martingale& f, const DyadicWeight& w, double delta,
                                               double epsilon, double r, double lambda, double c_budget,
                                               double lemma_constant) {
  const auto& filt = f.filtration();
  require_matching(w, filt);
  if (!(delta > 0.0 && delta < 0.5)) throw ParameterError("delta must lie in (0, 1/2)");
  if (!(r > 2.0)) throw ParameterError("r must be > 2");
  if (!(lambda > 0.0)) throw ParameterError("lambda must be positive");
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  if (!(c_budget >= 0.0)) throw ParameterError("C_budget must be nonnegative");

  const Martingale unit = scaled(f, 1.0 / lambda);
  const auto V = variation_pointwise(unit, r);
  const auto M = maximal(unit);
  const auto S = square(unit);
  const auto mass = w.cell_mass();
  const auto mu = filt.cell_measure();

  double joint = 0.0, s_tail = 0.0, v_tail = 0.0;
  for (std::size_t c = 0; c < mass.size(); ++c) {
    if (V[c] > 3.0 && M[c] < delta) joint += mass[c];
    if (S[c] > delta) s_tail += mass[c];
    if (V[c] > 1.0) v_tail += mass[c];
  }

  // Per-level containment from the proof, evaluated on f / lambda.
  const auto sigma = first_variation_exceed(unit, r, 1.0);
  const auto sets = proof_sets(unit, delta);
  const int never = sigma.never;
  std::vector<double> leb_event(never + 1, 0.0), leb_level(never + 1, 0.0);
  std::vector<double> w_event(never + 1, 0.0), w_level(never + 1, 0.0);
  for (std::size_t c = 0; c < mass.size(); ++c) {
    const int m = sigma.level[c];
    leb_level[m] += mu[c];
    w_level[m] += mass[c];
    if (V[c] > 3.0 && M[c] < delta && sets.G.contains(c)) {
      leb_event[m] += mu[c];
      w_event[m] += mass[c];
    }
  }
  double leb_ratio = 0.0, w_ratio = 0.0;
  for (int m = 0; m <= never; ++m) {
    if (leb_level[m] > 0.0) leb_ratio = std::max(leb_ratio, leb_event[m] / leb_level[m]);
    if (w_level[m] > 0.0) w_ratio = std::max(w_ratio, w_event[m] / w_level[m]);
  }

  VerificationReport rep;
  rep.name = "weighted_good_lambda";
  rep.lhs = joint;
  rep.rhs = (s_tail == 0.0 ? 0.0 : c_budget * s_tail) + epsilon * v_tail;
  const double excess = joint - epsilon * v_tail;
  rep.empirical_constant = excess <= 0.0 ? 0.0 : ratio_constant(excess, s_tail);
  rep.pass = rep.lhs <= rep.rhs + 1e-12;
  rep.params = {{"delta", delta},
                {"epsilon", epsilon},
                {"r", r},
                {"lambda", lambda},
                {"C_budget", c_budget},
                {"joint", joint},
                {"S_tail", s_tail},
                {"V_tail", v_tail},
                {"containment_ratio", leb_ratio},
                {"weighted_containment_ratio", w_ratio},
                {"tolerance", 1e-12}};
  if (std::isfinite(lemma_constant)) {
    rep.params["lemma_constant"] = lemma_constant;
    rep.params["containment_bound"] = lemma_constant * delta * delta / ((r - 2.0) * (r - 2.0));
  }
  return rep;
}

}  // namespace mgvar
