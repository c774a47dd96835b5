#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mgvar/cell_set.hpp"

namespace mgvar {

using CellIndex = std::uint32_t;

/// One real value per finest cell (output of M, S, s, V_r, N_lambda, ...).
using PointwiseField = std::vector<double>;

/// Explicit nested-partition description: levels[n][atom] lists the cells of
/// that atom.
using LevelTable = std::vector<std::vector<std::vector<std::size_t>>>;

struct AtomId {
  int level = 0;
  std::size_t index = 0;
  friend bool operator==(const AtomId&, const AtomId&) = default;
};

struct FiltrationViolation {
  std::string kind;  // "partition", "positivity", "refinement"
  int level = -1;
  long atom = -1;
  long cell = -1;
  std::string message;
};

/// A finite measure space (cells with positive masses) together with nested
/// partitions F_0 ⊆ F_1 ⊆ ... ⊆ F_depth.
///
/// Atoms of each level are stored as index ranges into a per-level cell list.
/// Dyadic filtrations share one identity list, so every atom is a contiguous
/// block of cells and `atom_of` is a shift.  Values are immutable after
/// construction.
class Filtration {
 public:
  /// Binary splitting of [0,1) into 2^depth cells of measure 2^-depth.
  static Filtration dyadic(int depth);

  /// Builds from explicit levels and throws ParameterError listing every
  /// violation when the invariants do not hold.
  static Filtration from_levels(std::vector<double> cell_measure, const LevelTable& levels);

  /// Same as from_levels but keeps invalid input so `validate` can report on
  /// it.  Only the diagnostic accessors are meaningful for invalid objects.
  static Filtration unchecked(std::vector<double> cell_measure, const LevelTable& levels);

  int depth() const { return depth_; }
  std::size_t cells() const { return measure_.size(); }
  std::size_t atoms(int level) const { return offsets_[level].size() - 1; }
  bool dyadic_layout() const { return dyadic_; }

  std::span<const double> cell_measure() const { return measure_; }
  double total_measure() const { return total_; }

  std::span<const CellIndex> atom_cells(int level, std::size_t atom) const;
  std::size_t atom_of(int level, std::size_t cell) const;
  double atom_measure(int level, std::size_t atom) const { return atom_measure_[level][atom]; }

  /// Atom at `level - 1` containing `atom` (level >= 1).
  std::size_t parent(int level, std::size_t atom) const { return parent_[level][atom]; }
  /// Atoms at `level + 1` contained in `atom` (level < depth).
  std::span<const std::uint32_t> children(int level, std::size_t atom) const;

  /// Every atom with children splits into exactly two children of equal measure
  /// (single-child atoms are allowed).
  bool equal_binary_splits(double rel_tol = 1e-12) const;

  /// Explicit level table, e.g. for serialization.
  LevelTable levels() const;

 private:
  Filtration() = default;
  void finalize_links();

  int depth_ = 0;
  bool dyadic_ = false;
  double total_ = 0.0;
  std::vector<double> measure_;
  // Per level: atom a owns members[offsets[a] .. offsets[a+1]).
  std::vector<std::vector<std::uint32_t>> offsets_;
  std::vector<std::shared_ptr<const std::vector<CellIndex>>> members_;
  std::vector<std::vector<std::uint32_t>> atom_of_;  // empty for dyadic layout
  std::vector<std::vector<double>> atom_measure_;
  std::vector<std::vector<std::uint32_t>> parent_;
  std::vector<std::vector<std::uint32_t>> child_offsets_;
  std::vector<std::vector<std::uint32_t>> child_list_;

  friend std::vector<FiltrationViolation> validate(const Filtration&);
};

/// Empty iff every Filtration invariant holds.
std::vector<FiltrationViolation> validate(const Filtration& filtration);

/// E[field | F_level]: measure-weighted average over each level atom.
PointwiseField conditional_expectation(std::span<const double> field, int level,
                                       const Filtration& filtration);

/// Worst parent/child measure ratio; every nonnegative martingale satisfies
/// g_n <= R* g_{n-1}.  Returns 1 for depth 0.
double regularity_constant(const Filtration& filtration);

/// Random nested partitions of `cells` cells with random positive masses
/// summing to 1.  Atoms are not contiguous in cell order.
Filtration random_filtration(int depth, std::size_t cells, std::uint64_t seed);

/// Comb: level n splits the single non-leaf atom into a large part and a
/// one-cell leaf carrying fraction q_n ~ U[q_min, q_max] of its mass.  Has
/// depth + 1 cells; cell 0 stays in the large atom throughout.
Filtration comb_filtration(int depth, double q_min, double q_max, std::uint64_t seed);

/// Total measure of the cells in `set`.
double measure(const CellSet& set, const Filtration& filtration);

/// True iff `set` is a union of atoms of the given level.
bool is_union_of_atoms(const CellSet& set, int level, const Filtration& filtration);

}  // namespace mgvar
