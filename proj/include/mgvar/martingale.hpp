#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mgvar/filtration.hpp"

namespace mgvar {

/// Level paths of a martingale, one row per atom of the finest level.  Every
/// cell of that atom shares the row.
class PathTable {
 public:
  PathTable(std::size_t rows, std::size_t length)
      : rows_(rows), length_(length), data_(rows * length, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t length() const { return length_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * length_, length_);
  }
  std::span<double> row(std::size_t i) { return std::span<double>(data_).subspan(i * length_, length_); }

 private:
  std::size_t rows_;
  std::size_t length_;
  std::vector<double> data_;
};

/// (f_0, ..., f_N) adapted to a filtration: one value per atom per level.
///
/// Adaptedness holds by representation.  The martingale property
/// sum_{children A'} mu(A') f(A') = mu(A) f(A) is checked by `residual`, not
/// enforced, so intermediate objects (and deliberately broken ones in tests)
/// can be represented.
class Martingale {
 public:
  /// Throws ParameterError when the value table does not match the atom counts.
  Martingale(std::shared_ptr<const Filtration> filtration, std::vector<std::vector<double>> values);

  const Filtration& filtration() const { return *filtration_; }
  const std::shared_ptr<const Filtration>& filtration_ptr() const { return filtration_; }
  int depth() const { return filtration_->depth(); }

  std::span<const double> level(int n) const { return values_[n]; }
  const std::vector<std::vector<double>>& values() const { return values_; }
  double value(int n, std::size_t cell) const { return values_[n][filtration_->atom_of(n, cell)]; }

  /// f_n as a field on cells.
  PointwiseField level_field(int n) const;

  /// One path per finest-level atom; row i belongs to atom i of level depth.
  PathTable paths() const;

  /// Largest violation of the martingale property over parent atoms A,
  /// |sum_{A'} mu(A') f(A') - mu(A) f(A)| / (mu(A) max|f|), i.e. relative to
  /// the sup norm of the whole martingale.  0 for the zero martingale.
  double residual() const;

  /// True iff every value is exactly zero.
  bool identically_zero() const;

 private:
  std::shared_ptr<const Filtration> filtration_;
  std::vector<std::vector<double>> values_;
};

/// f_n = E[terminal | F_n] for every level.
Martingale from_terminal(std::shared_ptr<const Filtration> filtration, std::span<const double> terminal);

/// factor * f.
Martingale scaled(const Martingale& f, double factor);

enum class GeneratorKind {
  terminal_gaussian,  // iid N(0,1) cell values, then conditional expectations
  uniform_terminal,   // iid U[-1,1] cell values
  dyadic_rademacher,  // f_0 = 0, children parent +/- t_n with independent signs
  reflecting,         // larger child jumps to the opposite side of zero
};

std::string to_string(GeneratorKind kind);
GeneratorKind generator_from_string(const std::string& name);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::terminal_gaussian;
  // Amplitude: each draw picks a scale log-uniformly in [scale_min, scale_max].
  double scale_min = 1.0;
  double scale_max = 1.0;
  // dyadic_rademacher: t_n = scale * schedule[n-1]; empty schedule means 1.
  std::vector<double> schedule;
  // reflecting: magnitudes are drawn from scale * U[amplitude_floor, 1].
  double amplitude_floor = 0.8;
};

/// Deterministic function of (filtration, spec, seed).  dyadic_rademacher
/// requires equal-measure binary splits; reflecting requires at most two
/// children per atom.  Mismatches throw ParameterError.
Martingale random_martingale(std::shared_ptr<const Filtration> filtration, const GeneratorSpec& spec,
                             std::uint64_t seed);

/// Cell values of f_N (the terminal level) for re-use as a terminal field.
PointwiseField terminal_field(const Martingale& f);

}  // namespace mgvar
