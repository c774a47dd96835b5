#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Oscillation functionals of a single real sequence a_0, ..., a_{L-1}: the
// r-variation, lambda-jump counts and the dyadic jump majorant, each with an
// exhaustive oracle used by the tests.

namespace mgvar {

/// Witness for an r-variation value: increasing indices n_0 < ... < n_J.
struct VariationCertificate {
  double value = 0.0;
  std::vector<std::size_t> indices;
};

/// Witness for a lambda-jump count: chain n_0 < ... < n_J with every
/// consecutive gap strictly larger than lambda.
struct JumpChain {
  std::size_t count = 0;
  std::vector<std::size_t> indices;
};

/// |x|^r as exp(r ln|x|), with 0 for x == 0.
double pow_abs(double x, double r);

/// |a - b| > lambda; the single predicate every jump routine uses.
inline bool gap_exceeds(double a, double b, double lambda) {
  const double d = a - b;
  return (d < 0 ? -d : d) > lambda;
}

/// Exact sup over increasing subsequences of (sum |increments|^r)^(1/r) by
/// dynamic programming.  Ties resolve to the earliest index.  r >= 1.
VariationCertificate variation(std::span<const double> path, double r);

/// Same value as `variation`, computed after discarding interior points that
/// are not strict local extrema.  Certificate indices refer to `path`.
VariationCertificate variation_pruned(std::span<const double> path, double r);

/// Exhaustive maximum over all subsequences.  Refuses paths longer than 16.
double variation_bruteforce(std::span<const double> path, double r);

/// prefix[m] = V_r(a_0, ..., a_m).
std::vector<double> prefix_variation(std::span<const double> path, double r);

/// (sum_j |a_{n_j} - a_{n_{j-1}}|^r)^(1/r) for the given indices.
double certificate_value(std::span<const double> path, std::span<const std::size_t> indices,
                         double r);

/// N_lambda: longest chain with consecutive gaps > lambda.  O(L^2) DP.
JumpChain jump_count_chain(std::span<const double> path, double lambda);

/// N_lambda via range-maximum queries over value ranks, O(L log L).
std::size_t jump_count_chain_fast(std::span<const double> path, double lambda);

/// N_lambda by enumerating all 2^L subsequences (L <= 20).
std::size_t jump_count_chain_bruteforce(std::span<const double> path, double lambda);

/// N'_lambda: maximum number of index pairs (s_1,t_1), (s_2,t_2), ... with
/// s_1 < t_1 <= s_2 < t_2 <= ... and each |a_t - a_s| > lambda.  Greedy scan.
std::size_t jump_count_pairs(std::span<const double> path, double lambda);

/// N'_lambda by exhaustive recursion over pair systems (L <= 16).
std::size_t jump_count_pairs_bruteforce(std::span<const double> path, double lambda);

/// Upper bound for V_r^r:
///   sum_l 2^{r(l+1)} N'_{2^l}
/// truncated above at the largest l with 2^l < max gap and below once the
/// geometric tail bound (L-1) 2^{rl} / (1 - 2^{-r}) drops under `tolerance`;
/// the tail bound is added to the result.  Requires r > 2 unless `diagnostic`.
double dyadic_jump_majorant(std::span<const double> path, double r, double tolerance,
                            bool diagnostic = false);

/// sum_l 2^{rl} N_{2^l} with chain counts, truncated the same way (tail bound
/// included).  Kept to document that this literal form is not an upper bound
/// for V_r^r: on (0, 1, 0) with r = 2 it gives 2/3 against V_2^2 = 2.
double literal_jump_sum(std::span<const double> path, double r, double tolerance);

/// c_r = 2 (1 - 2^{-(r-2)/2}), the reciprocal of (1/2) sum_{l<=0} 2^{(r-2)l/2}.
double c_r_constant(double r);

/// The same constant from the series truncated to l = 0, -1, ..., -(terms-1).
double c_r_series(double r, int terms);

}  // namespace mgvar
