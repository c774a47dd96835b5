#include "mgvar/operators.hpp"

#include <algorithm>
#include <cmath>

#include "mgvar/errors.hpp"

namespace mgvar {

PointwiseField row_field(const Filtration& f, std::span<const double> per_row) {
  const int depth = f.depth();
  PointwiseField out(f.cells());
  for (std::size_t a = 0; a < f.atoms(depth); ++a) {
    for (CellIndex c : f.atom_cells(depth, a)) out[c] = per_row[a];
  }
  return out;
}

PointwiseField maximal(const Martingale& f) {
  const auto table = f.paths();
  std::vector<double> rows(table.rows(), 0.0);
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (double v : table.row(i)) rows[i] = std::max(rows[i], std::fabs(v));
  }
  return row_field(f.filtration(), rows);
}

PointwiseField square(const Martingale& f) {
  const auto table = f.paths();
  std::vector<double> rows(table.rows(), 0.0);
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const auto path = table.row(i);
    double acc = 0.0;
    for (std::size_t n = 1; n < path.size(); ++n) {
      const double d = path[n] - path[n - 1];
      acc += d * d;
    }
    rows[i] = std::sqrt(acc);
  }
  return row_field(f.filtration(), rows);
}

PointwiseField conditional_square(const Martingale& f) {
  const auto& filt = f.filtration();
  const int depth = filt.depth();
  // acc[n][A]: sum over k <= n of E[d_k^2 | F_{k-1}] on level-n atom A.
  std::vector<double> acc(filt.atoms(0), 0.0);
  for (int n = 1; n <= depth; ++n) {
    std::vector<double> next(filt.atoms(n), 0.0);
    const auto parent_values = f.level(n - 1);
    const auto child_values = f.level(n);
    for (std::size_t p = 0; p < filt.atoms(n - 1); ++p) {
      double second_moment = 0.0;
      for (auto child : filt.children(n - 1, p)) {
        const double d = child_values[child] - parent_values[p];
        second_moment += filt.atom_measure(n, child) * d * d;
      }
      second_moment /= filt.atom_measure(n - 1, p);
      for (auto child : filt.children(n - 1, p)) next[child] = acc[p] + second_moment;
    }
    acc = std::move(next);
  }
  for (double& v : acc) v = std::sqrt(v);
  return row_field(filt, acc);
}

PointwiseField variation_pointwise(const Martingale& f, double r) {
  const auto table = f.paths();
  std::vector<double> rows(table.rows());
  for (std::size_t i = 0; i < table.rows(); ++i) rows[i] = variation_pruned(table.row(i), r).value;
  return row_field(f.filtration(), rows);
}

std::vector<VariationCertificate> variation_certificates(const Martingale& f, double r) {
  const auto table = f.paths();
  std::vector<VariationCertificate> out;
  out.reserve(table.rows());
  for (std::size_t i = 0; i < table.rows(); ++i) out.push_back(variation(table.row(i), r));
  return out;
}

PointwiseField jump_pointwise(const Martingale& f, double lambda) {
  const auto table = f.paths();
  std::vector<double> rows(table.rows());
  for (std::size_t i = 0; i < table.rows(); ++i) {
    rows[i] = static_cast<double>(jump_count_chain_fast(table.row(i), lambda));
  }
  return row_field(f.filtration(), rows);
}

double lp_norm(std::span<const double> field, const Filtration& f, double p) {
  if (!(p > 0.0)) throw ParameterError("Lp exponent must be positive");
  if (field.size() != f.cells()) throw ParameterError("field length does not match cell count");
  const auto mu = f.cell_measure();
  double acc = 0.0;
  for (std::size_t c = 0; c < field.size(); ++c) {
    if (field[c] != 0.0) acc += mu[c] * std::pow(std::fabs(field[c]), p);
  }
  return acc > 0.0 ? std::pow(acc, 1.0 / p) : 0.0;
}

CellSet exceed_set(std::span<const double> field, double threshold, Threshold mode) {
  CellSet out(field.size());
  for (std::size_t c = 0; c < field.size(); ++c) {
    out.assign(c, mode == Threshold::strict ? field[c] > threshold : field[c] >= threshold);
  }
  return out;
}

CellSet below_set(std::span<const double> field, double threshold, Threshold mode) {
  CellSet out(field.size());
  for (std::size_t c = 0; c < field.size(); ++c) {
    out.assign(c, mode == Threshold::strict ? field[c] < threshold : field[c] <= threshold);
  }
  return out;
}

double distribution(std::span<const double> field, const Filtration& f, double threshold,
                    Threshold mode) {
  return measure(exceed_set(field, threshold, mode), f);
}

double distribution(std::span<const double> field, const Filtration& f, double threshold,
                    Threshold mode, const CellSet& filter) {
  return measure(exceed_set(field, threshold, mode) & filter, f);
}

}  // namespace mgvar
