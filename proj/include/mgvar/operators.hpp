#pragma once

#include <span>
#include <vector>

#include "mgvar/cell_set.hpp"
#include "mgvar/filtration.hpp"
#include "mgvar/martingale.hpp"
#include "mgvar/paths.hpp"

namespace mgvar {

/// M(f) = max_n |f_n| per cell.
PointwiseField maximal(const Martingale& f);

/// S(f) = (sum_{n=1..N} |f_n - f_{n-1}|^2)^(1/2) per cell.
PointwiseField square(const Martingale& f);

/// s(f) = (sum_{n=1..N} E[|f_n - f_{n-1}|^2 | F_{n-1}])^(1/2) per cell.
PointwiseField conditional_square(const Martingale& f);

/// V_r of each cell's level path, evaluated once per finest-level atom.
PointwiseField variation_pointwise(const Martingale& f, double r);

/// Certificates per finest-level atom (row order of Martingale::paths).
std::vector<VariationCertificate> variation_certificates(const Martingale& f, double r);

/// N_lambda of each cell's level path.
PointwiseField jump_pointwise(const Martingale& f, double lambda);

/// Broadcasts one value per finest-level atom to its cells.
PointwiseField row_field(const Filtration& filtration, std::span<const double> per_row);

/// (sum_c mu(c) |field(c)|^p)^(1/p), p > 0.
double lp_norm(std::span<const double> field, const Filtration& filtration, double p);

enum class Threshold { strict, non_strict };

/// Cells with field > threshold (strict) or field >= threshold.
CellSet exceed_set(std::span<const double> field, double threshold, Threshold mode = Threshold::strict);

/// Cells with field < threshold (strict) or field <= threshold.
CellSet below_set(std::span<const double> field, double threshold, Threshold mode = Threshold::strict);

/// nu{field > threshold} (or >=).
double distribution(std::span<const double> field, const Filtration& filtration, double threshold,
                    Threshold mode = Threshold::strict);

/// nu({field > threshold} ∩ filter) for joint events.
double distribution(std::span<const double> field, const Filtration& filtration, double threshold,
                    Threshold mode, const CellSet& filter);

}  // namespace mgvar
