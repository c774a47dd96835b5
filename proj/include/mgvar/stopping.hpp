#pragma once

#include <span>
#include <vector>

#include "mgvar/cell_set.hpp"
#include "mgvar/martingale.hpp"

// Stopping times and the sets and transforms built from them in the proof of
// the good-lambda inequality: sigma, g = f - f_{n ∧ sigma}, B, B*, G, U_n and
// the truncated martingale g~.

namespace mgvar {

/// Per cell, a level in 0..N or `never` (= N + 1).
struct StoppingTime {
  int never = 1;
  std::vector<int> level;

  bool stopped(std::size_t cell) const { return level[cell] != never; }
  /// Cells with sigma == m.
  CellSet at(int m) const;
};

/// {sigma = m} is a union of level-m atoms for every m.
bool is_measurable(const StoppingTime& sigma, const Filtration& filtration);

/// prefix[row][m] = V_r(f_0, ..., f_m) along each finest-level atom path.
PathTable prefix_variation_table(const Martingale& f, double r);

/// Minimal m with V_r(f_0, ..., f_m) > threshold per cell, or never.
/// Requires r > 1 and threshold > 0.  Ties at the threshold do not stop.
StoppingTime first_variation_exceed(const Martingale& f, double r, double threshold);

/// Same, from a precomputed prefix table (re-usable across thresholds).
StoppingTime first_variation_exceed(const Filtration& filtration, const PathTable& prefix,
                                    double threshold);

/// g_n = f_n - f_{n ∧ sigma}.  g_n is exactly zero wherever sigma >= n.
/// Throws ContractError for a non-measurable sigma.
Martingale stopped_tail(const Martingale& f, const StoppingTime& sigma);

struct ProofSets {
  CellSet B;       // {s(f) > delta}
  CellSet B_star;  // {M(E[1_B | F_.]) > 1/2}
  CellSet G;       // complement of B_star
  std::vector<CellSet> U;                        // U[n] = {E[1_B | F_n] <= 1/2}
  std::vector<std::vector<std::uint8_t>> U_atoms;  // same, per level-n atom
};

/// Requires 0 < delta < 1/2; throws ParameterError otherwise.
ProofSets proof_sets(const Martingale& f, double delta);

/// Same, with s(f) already computed.
ProofSets proof_sets(const Martingale& f, std::span<const double> cond_square, double delta);

/// g~ with g~_0 = 0 and increments (g_n - g_{n-1}) 1_{U_{n-1}}.  While a path
/// has stayed in U the value is evaluated as g_n - g_0, so g~ = g - g_0 holds
/// bit-for-bit on every cell that never leaves U.
Martingale truncated_transform(const Martingale& g, const ProofSets& sets);

}  // namespace mgvar
