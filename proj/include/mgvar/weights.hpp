#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mgvar/cell_set.hpp"
#include "mgvar/filtration.hpp"
#include "mgvar/martingale.hpp"
#include "mgvar/report.hpp"

namespace mgvar {

/// A positive density on the 2^depth cells of the dyadic filtration, with
/// masses w(I) for every dyadic interval accumulated bottom-up.
class DyadicWeight {
 public:
  /// density[c] > 0 for every cell; w(cell) = density[c] * 2^-depth.
  static DyadicWeight from_density(int depth, std::vector<double> density);
  /// Cell masses w(cell) > 0 directly.
  static DyadicWeight from_cell_masses(int depth, std::span<const double> masses);

  int depth() const { return depth_; }
  std::size_t cells() const { return density_.size(); }
  std::span<const double> density() const { return density_; }
  /// w(cell) for every finest cell.
  std::span<const double> cell_mass() const { return mass_.back(); }
  /// w of the `index`-th dyadic interval at `level`.
  double mass(int level, std::size_t index) const { return mass_[level][index]; }
  double total() const { return mass_[0][0]; }

 private:
  int depth_ = 0;
  std::vector<double> density_;
  std::vector<std::vector<double>> mass_;
};

DyadicWeight lebesgue_weight(int depth);

/// Multiplicative cascade: each interval draws rho uniformly in [0, rho_max]
/// and a random side; its children get densities parent * (1 + rho) and
/// parent * (1 - rho).  Requires 0 <= rho_max < 1.
DyadicWeight cascade_weight(int depth, double rho_max, std::uint64_t seed);

/// max over dyadic intervals of the larger sibling-mass ratio.  The
/// filtration must be the dyadic filtration of the weight's depth.
double doubling_constant(const DyadicWeight& w, const Filtration& filtration);

struct AInftyProfile {
  std::vector<double> gamma;
  std::vector<double> epsilon;  // epsilon[i] = sup_I max_{|E| <= gamma[i] |I|} w(E) / w(I)
};

/// For each dyadic interval the extremal E collects the floor(gamma 2^{N-n})
/// cells of largest density; the profile is the sup over intervals.
AInftyProfile ainfty_profile(const DyadicWeight& w, const Filtration& filtration,
                             std::span<const double> gamma_grid);

/// Default gamma grid: k / 2^depth for k = 1..2^depth - 1 when that is at
/// most 64 points, else 63 evenly spaced multiples of 1/64.
std::vector<double> default_gamma_grid(int depth);

/// w of {field > threshold} (intersected with `filter` when given).
double weighted_distribution(std::span<const double> field, const DyadicWeight& w, double threshold,
                             const CellSet* filter = nullptr);

struct AdmissibleDelta {
  double gamma = 0.0;  // largest grid gamma with epsilon(gamma) <= epsilon
  double delta = 0.0;  // min(sqrt(gamma (r-2)^2 / lemma_constant), 0.49)
};

/// Nothing when no grid gamma reaches the requested epsilon.
std::optional<AdmissibleDelta> admissible_delta(const AInftyProfile& profile, double epsilon, double r,
                                                double lemma_constant);

/// w{V_r > 3 lambda, M < delta lambda} <= C w{S > delta lambda} + epsilon w{V_r > lambda}.
/// empirical_constant is the smallest C that satisfies it.  The report also
/// carries, for f / lambda, the worst per-level ratios
///   |{V_r > 3, M < delta, G, sigma = m}| / |{sigma = m}|  (Lebesgue)
///   w{V_r > 3, M < delta, G, sigma = m} / w{sigma = m}
/// and, when lemma_constant is finite, the bound lemma_constant delta^2 / (r-2)^2.
VerificationReport verify_weighted_good_lambda(const Martingale& f, const DyadicWeight& w, double delta,
                                               double epsilon, double r, double lambda, double c_budget,
                                               double lemma_constant = std::numeric_limits<double>::quiet_NaN());

}  // namespace mgvar
