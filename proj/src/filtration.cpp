#include "mgvar/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "mgvar/errors.hpp"

namespace mgvar {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

std::string describe(const std::vector<FiltrationViolation>& violations) {
  std::ostringstream os;
  os << "invalid filtration:";
  for (const auto& v : violations) os << "\n  [" << v.kind << "] " << v.message;
  return os.str();
}

}  // namespace

Filtration Filtration::dyadic(int depth) {
  if (depth < 0 || depth > 24) {
    throw ParameterError("dyadic depth must lie in [0, 24], got " + std::to_string(depth));
  }
  Filtration f;
  f.depth_ = depth;
  f.dyadic_ = true;
  const std::size_t cells = std::size_t{1} << depth;
  f.measure_.assign(cells, std::ldexp(1.0, -depth));
  f.total_ = 1.0;

  auto identity = std::make_shared<std::vector<CellIndex>>(cells);
  std::iota(identity->begin(), identity->end(), CellIndex{0});

  const auto levels = static_cast<std::size_t>(depth) + 1;
  f.offsets_.resize(levels);
  f.members_.assign(levels, identity);
  f.atom_measure_.resize(levels);
  for (int n = 0; n <= depth; ++n) {
    const std::size_t atoms = std::size_t{1} << n;
    const std::size_t block = std::size_t{1} << (depth - n);
    auto& off = f.offsets_[n];
    off.resize(atoms + 1);
    for (std::size_t a = 0; a <= atoms; ++a) off[a] = static_cast<std::uint32_t>(a * block);
    f.atom_measure_[n].assign(atoms, std::ldexp(1.0, -n));
  }
  f.finalize_links();
  return f;
}

Filtration Filtration::unchecked(std::vector<double> cell_measure, const LevelTable& levels) {
  if (levels.empty()) throw ParameterError("a filtration needs at least one level");
  if (cell_measure.empty()) throw ParameterError("a filtration needs at least one cell");
  Filtration f;
  f.depth_ = static_cast<int>(levels.size()) - 1;
  f.measure_ = std::move(cell_measure);
  f.total_ = std::accumulate(f.measure_.begin(), f.measure_.end(), 0.0);
  const std::size_t cells = f.measure_.size();

  f.offsets_.resize(levels.size());
  f.members_.resize(levels.size());
  f.atom_of_.resize(levels.size());
  f.atom_measure_.resize(levels.size());
  for (std::size_t n = 0; n < levels.size(); ++n) {
    auto members = std::make_shared<std::vector<CellIndex>>();
    auto& off = f.offsets_[n];
    auto& owner = f.atom_of_[n];
    owner.assign(cells, kNone);
    off.push_back(0);
    for (std::size_t a = 0; a < levels[n].size(); ++a) {
      double mass = 0.0;
      for (std::size_t c : levels[n][a]) {
        const auto stored = c < kNone ? static_cast<CellIndex>(c) : kNone;
        members->push_back(stored);
        if (c < cells) {
          owner[c] = static_cast<std::uint32_t>(a);
          mass += f.measure_[c];
        }
      }
      f.atom_measure_[n].push_back(mass);
      off.push_back(static_cast<std::uint32_t>(members->size()));
    }
    f.members_[n] = std::move(members);
  }
  f.finalize_links();
  return f;
}

Filtration Filtration::from_levels(std::vector<double> cell_measure, const LevelTable& levels) {
  Filtration f = unchecked(std::move(cell_measure), levels);
  const auto violations = validate(f);
  if (!violations.empty()) throw ParameterError(describe(violations));
  return f;
}

void Filtration::finalize_links() {
  const auto levels = static_cast<std::size_t>(depth_) + 1;
  parent_.assign(levels, {});
  child_offsets_.assign(levels, {});
  child_list_.assign(levels, {});
  for (int n = 1; n <= depth_; ++n) {
    auto& par = parent_[n];
    par.assign(atoms(n), kNone);
    for (std::size_t a = 0; a < atoms(n); ++a) {
      const auto cells_of = atom_cells(n, a);
      if (cells_of.empty() || cells_of.front() >= cells()) continue;
      const std::size_t up = atom_of(n - 1, cells_of.front());
      if (up != kNone) par[a] = static_cast<std::uint32_t>(up);
    }
  }
  for (int n = 0; n < depth_; ++n) {
    const std::size_t count = atoms(n);
    std::vector<std::uint32_t> degree(count + 1, 0);
    for (std::uint32_t p : parent_[n + 1]) {
      if (p < count) ++degree[p + 1];
    }
    std::partial_sum(degree.begin(), degree.end(), degree.begin());
    auto& list = child_list_[n];
    list.assign(degree.back(), 0);
    std::vector<std::uint32_t> cursor(degree.begin(), degree.end() - 1);
    for (std::size_t a = 0; a < parent_[n + 1].size(); ++a) {
      const auto p = parent_[n + 1][a];
      if (p < count) list[cursor[p]++] = static_cast<std::uint32_t>(a);
    }
    child_offsets_[n] = std::move(degree);
  }
}

std::span<const CellIndex> Filtration::atom_cells(int level, std::size_t atom) const {
  const auto& off = offsets_[level];
  const auto& mem = *members_[level];
  return std::span<const CellIndex>(mem).subspan(off[atom], off[atom + 1] - off[atom]);
}

std::size_t Filtration::atom_of(int level, std::size_t cell) const {
  if (dyadic_) return cell >> (depth_ - level);
  return atom_of_[level][cell];
}

std::span<const std::uint32_t> Filtration::children(int level, std::size_t atom) const {
  const auto& off = child_offsets_[level];
  return std::span<const std::uint32_t>(child_list_[level]).subspan(off[atom], off[atom + 1] - off[atom]);
}

bool Filtration::equal_binary_splits(double rel_tol) const {
  for (int n = 0; n < depth_; ++n) {
    for (std::size_t a = 0; a < atoms(n); ++a) {
      const auto kids = children(n, a);
      if (kids.size() == 1) continue;
      if (kids.size() != 2) return false;
      const double m0 = atom_measure(n + 1, kids[0]);
      const double m1 = atom_measure(n + 1, kids[1]);
      if (std::abs(m0 - m1) > rel_tol * std::max(m0, m1)) return false;
    }
  }
  return true;
}

LevelTable Filtration::levels() const {
  LevelTable out(static_cast<std::size_t>(depth_) + 1);
  for (int n = 0; n <= depth_; ++n) {
    for (std::size_t a = 0; a < atoms(n); ++a) {
      const auto cs = atom_cells(n, a);
      out[n].emplace_back(cs.begin(), cs.end());
    }
  }
  return out;
}

std::vector<FiltrationViolation> validate(const Filtration& f) {
  std::vector<FiltrationViolation> out;
  const std::size_t cells = f.cells();

  for (std::size_t c = 0; c < cells; ++c) {
    const double m = f.measure_[c];
    if (!(m > 0.0) || !std::isfinite(m)) {
      out.push_back({"positivity", -1, -1, static_cast<long>(c),
                     "cell " + std::to_string(c) + " has non-positive or non-finite measure"});
    }
  }

  std::vector<bool> level_ok(static_cast<std::size_t>(f.depth_) + 1, true);
  for (int n = 0; n <= f.depth_; ++n) {
    std::vector<int> seen(cells, 0);
    for (std::size_t a = 0; a < f.atoms(n); ++a) {
      const auto cs = f.atom_cells(n, a);
      if (cs.empty()) {
        out.push_back({"partition", n, static_cast<long>(a), -1,
                       "level " + std::to_string(n) + " atom " + std::to_string(a) + " is empty"});
        level_ok[n] = false;
      }
      for (CellIndex c : cs) {
        if (c >= cells) {
          out.push_back({"partition", n, static_cast<long>(a), static_cast<long>(c),
                         "level " + std::to_string(n) + " atom " + std::to_string(a) +
                             " references unknown cell " + std::to_string(c)});
          level_ok[n] = false;
        } else {
          ++seen[c];
        }
      }
    }
    for (std::size_t c = 0; c < cells; ++c) {
      if (seen[c] != 1) {
        out.push_back({"partition", n, -1, static_cast<long>(c),
                       "level " + std::to_string(n) + " covers cell " + std::to_string(c) + " " +
                           std::to_string(seen[c]) + " times"});
        level_ok[n] = false;
      }
    }
  }

  for (int n = 1; n <= f.depth_; ++n) {
    if (!level_ok[n - 1]) continue;
    for (std::size_t a = 0; a < f.atoms(n); ++a) {
      const auto cs = f.atom_cells(n, a);
      std::size_t first = kNone;
      bool straddles = false;
      for (CellIndex c : cs) {
        if (c >= cells) continue;
        const std::size_t up = f.atom_of(n - 1, c);
        if (first == kNone) {
          first = up;
        } else if (up != first) {
          straddles = true;
        }
      }
      if (straddles) {
        out.push_back({"refinement", n, static_cast<long>(a), -1,
                       "level " + std::to_string(n) + " atom " + std::to_string(a) +
                           " is not contained in a single level " + std::to_string(n - 1) + " atom"});
      }
    }
  }
  return out;
}

PointwiseField conditional_expectation(std::span<const double> field, int level,
                                       const Filtration& f) {
  if (level < 0 || level > f.depth()) {
    throw ParameterError("conditioning level " + std::to_string(level) + " outside [0, " +
                         std::to_string(f.depth()) + "]");
  }
  if (field.size() != f.cells()) throw ParameterError("field length does not match cell count");
  const auto mu = f.cell_measure();
  PointwiseField out(field.size());
  for (std::size_t a = 0; a < f.atoms(level); ++a) {
    const auto cs = f.atom_cells(level, a);
    double acc = 0.0;
    for (CellIndex c : cs) acc += mu[c] * field[c];
    const double avg = acc / f.atom_measure(level, a);
    for (CellIndex c : cs) out[c] = avg;
  }
  return out;
}

double regularity_constant(const Filtration& f) {
  double worst = 1.0;
  for (int n = 1; n <= f.depth(); ++n) {
    for (std::size_t a = 0; a < f.atoms(n); ++a) {
      const double ratio = f.atom_measure(n - 1, f.parent(n, a)) / f.atom_measure(n, a);
      worst = std::max(worst, ratio);
    }
  }
  return worst;
}

Filtration random_filtration(int depth, std::size_t cells, std::uint64_t seed) {
  if (depth < 0) throw ParameterError("depth must be nonnegative");
  if (cells == 0) throw ParameterError("a filtration needs at least one cell");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(cells);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::uniform_real_distribution<double> mass(0.05, 1.0);
  std::vector<double> measure(cells);
  double total = 0.0;
  for (auto& m : measure) total += (m = mass(rng));
  for (auto& m : measure) m /= total;

  // Atoms are ranges [begin, end) of `order`.
  std::vector<std::pair<std::size_t, std::size_t>> ranges{{0, cells}};
  LevelTable levels;
  std::bernoulli_distribution split(0.75);
  for (int n = 0; n <= depth; ++n) {
    if (n > 0) {
      std::vector<std::pair<std::size_t, std::size_t>> next;
      for (auto [b, e] : ranges) {
        const std::size_t size = e - b;
        if (size < 2 || !split(rng)) {
          next.emplace_back(b, e);
          continue;
        }
        const std::size_t parts = std::min<std::size_t>(size, std::uniform_int_distribution<std::size_t>(2, 3)(rng));
        std::vector<std::size_t> cuts(size - 1);
        std::iota(cuts.begin(), cuts.end(), b + 1);
        std::shuffle(cuts.begin(), cuts.end(), rng);
        cuts.resize(parts - 1);
        std::sort(cuts.begin(), cuts.end());
        std::size_t start = b;
        for (std::size_t cut : cuts) {
          next.emplace_back(start, cut);
          start = cut;
        }
        next.emplace_back(start, e);
      }
      ranges = std::move(next);
    }
    auto& level = levels.emplace_back();
    for (auto [b, e] : ranges) level.emplace_back(order.begin() + static_cast<long>(b), order.begin() + static_cast<long>(e));
  }
  return Filtration::from_levels(std::move(measure), levels);
}

Filtration comb_filtration(int depth, double q_min, double q_max, std::uint64_t seed) {
  if (depth < 0) throw ParameterError("depth must be nonnegative");
  if (!(q_min > 0.0) || !(q_max < 1.0) || q_min > q_max) {
    throw ParameterError("comb split fractions need 0 < q_min <= q_max < 1");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> draw(q_min, q_max);
  const std::size_t cells = static_cast<std::size_t>(depth) + 1;
  std::vector<double> measure(cells, 0.0);
  double main = 1.0;
  for (int n = 1; n <= depth; ++n) {
    const double q = q_min == q_max ? q_min : draw(rng);
    measure[static_cast<std::size_t>(depth - n + 1)] = main * q;
    main *= 1.0 - q;
  }
  measure[0] = main;

  LevelTable levels(cells);
  for (int n = 0; n <= depth; ++n) {
    auto& level = levels[n];
    std::vector<std::size_t> trunk(static_cast<std::size_t>(depth - n) + 1);
    std::iota(trunk.begin(), trunk.end(), std::size_t{0});
    level.push_back(std::move(trunk));
    for (int c = depth - n + 1; c <= depth; ++c) level.push_back({static_cast<std::size_t>(c)});
  }
  return Filtration::from_levels(std::move(measure), levels);
}

double measure(const CellSet& set, const Filtration& f) {
  const auto mu = f.cell_measure();
  double acc = 0.0;
  for (std::size_t c = 0; c < set.size(); ++c) {
    if (set.contains(c)) acc += mu[c];
  }
  return acc;
}

bool is_union_of_atoms(const CellSet& set, int level, const Filtration& f) {
  for (std::size_t a = 0; a < f.atoms(level); ++a) {
    const auto cs = f.atom_cells(level, a);
    const bool first = set.contains(cs.front());
    for (CellIndex c : cs) {
      if (set.contains(c) != first) return false;
    }
  }
  return true;
}

}  // namespace mgvar
