#include "mgvar/stopping.hpp"

#include <algorithm>
#include <cmath>

#include "mgvar/errors.hpp"
#include "mgvar/operators.hpp"
#include "mgvar/paths.hpp"

namespace mgvar {

CellSet StoppingTime::at(int m) const {
  CellSet out(level.size());
  for (std::size_t c = 0; c < level.size(); ++c) out.assign(c, level[c] == m);
  return out;
}

bool is_measurable(const StoppingTime& sigma, const Filtration& f) {
  if (sigma.level.size() != f.cells() || sigma.never != f.depth() + 1) return false;
  for (int m = 0; m <= f.depth(); ++m) {
    for (std::size_t a = 0; a < f.atoms(m); ++a) {
      const auto cs = f.atom_cells(m, a);
      const bool first = sigma.level[cs.front()] == m;
      for (CellIndex c : cs) {
        if ((sigma.level[c] == m) != first) return false;
      }
    }
  }
  for (int v : sigma.level) {
    if (v < 0 || v > sigma.never) return false;
  }
  return true;
}

PathTable prefix_variation_table(const Martingale& f, double r) {
  const auto paths = f.paths();
  PathTable out(paths.rows(), paths.length());
  for (std::size_t i = 0; i < paths.rows(); ++i) {
    const auto prefix = prefix_variation(paths.row(i), r);
    std::copy(prefix.begin(), prefix.end(), out.row(i).begin());
  }
  return out;
}

StoppingTime first_variation_exceed(const Filtration& f, const PathTable& prefix, double threshold) {
  if (!(threshold > 0.0)) throw ParameterError("stopping threshold must be positive");
  const int depth = f.depth();
  StoppingTime sigma;
  sigma.never = depth + 1;
  sigma.level.assign(f.cells(), sigma.never);
  for (std::size_t a = 0; a < prefix.rows(); ++a) {
    const auto row = prefix.row(a);
    int hit = sigma.never;
    for (int m = 0; m <= depth; ++m) {
      if (row[m] > threshold) {
        hit = m;
        break;
      }
    }
    for (CellIndex c : f.atom_cells(depth, a)) sigma.level[c] = hit;
  }
  return sigma;
}

StoppingTime first_variation_exceed(const Martingale& f, double r, double threshold) {
  if (!(r > 1.0)) throw ParameterError("stopping rule needs r > 1");
  return first_variation_exceed(f.filtration(), prefix_variation_table(f, r), threshold);
}

Martingale stopped_tail(const Martingale& f, const StoppingTime& sigma) {
  const auto& filt = f.filtration();
  if (!is_measurable(sigma, filt)) throw ContractError("stopping time is not measurable for this filtration");
  const int depth = filt.depth();
  std::vector<std::vector<double>> values(static_cast<std::size_t>(depth) + 1);
  // frozen[A] = f_{n ∧ sigma} on level-n atom A.
  std::vector<double> frozen(f.level(0).begin(), f.level(0).end());
  values[0].assign(filt.atoms(0), 0.0);
  for (std::size_t a = 0; a < filt.atoms(0); ++a) values[0][a] = f.level(0)[a] - frozen[a];
  for (int n = 1; n <= depth; ++n) {
    std::vector<double> next(filt.atoms(n));
    values[n].resize(filt.atoms(n));
    const auto current = f.level(n);
    for (std::size_t a = 0; a < filt.atoms(n); ++a) {
      const int stop = sigma.level[filt.atom_cells(n, a).front()];
      next[a] = stop <= n - 1 ? frozen[filt.parent(n, a)] : current[a];
      values[n][a] = current[a] - next[a];
    }
    frozen = std::move(next);
  }
  return Martingale(f.filtration_ptr(), std::move(values));
}

ProofSets proof_sets(const Martingale& f, std::span<const double> cond_square, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw ParameterError("delta must lie in (0, 1/2)");
  const auto& filt = f.filtration();
  const int depth = filt.depth();
  ProofSets sets;
  sets.B = exceed_set(cond_square, delta);

  PointwiseField indicator(filt.cells(), 0.0);
  for (std::size_t c = 0; c < filt.cells(); ++c) indicator[c] = sets.B.contains(c) ? 1.0 : 0.0;
  const Martingale h = from_terminal(f.filtration_ptr(), indicator);

  sets.B_star = exceed_set(maximal(h), 0.5);
  sets.G = sets.B_star.complement();
  sets.U.reserve(static_cast<std::size_t>(depth) + 1);
  sets.U_atoms.resize(static_cast<std::size_t>(depth) + 1);
  for (int n = 0; n <= depth; ++n) {
    CellSet u(filt.cells());
    auto& flags = sets.U_atoms[n];
    flags.assign(filt.atoms(n), 0);
    for (std::size_t a = 0; a < filt.atoms(n); ++a) {
      if (h.level(n)[a] <= 0.5) {
        flags[a] = 1;
        for (CellIndex c : filt.atom_cells(n, a)) u.insert(c);
      }
    }
    sets.U.push_back(std::move(u));
  }
  return sets;
}

ProofSets proof_sets(const Martingale& f, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw ParameterError("delta must lie in (0, 1/2)");
  return proof_sets(f, conditional_square(f), delta);
}

Martingale truncated_transform(const Martingale& g, const ProofSets& sets) {
  const auto& filt = g.filtration();
  const int depth = filt.depth();
  if (sets.U_atoms.size() != static_cast<std::size_t>(depth) + 1) {
    throw ContractError("proof sets were built for a different depth");
  }
  for (int n = 0; n <= depth; ++n) {
    if (sets.U_atoms[n].size() != filt.atoms(n)) throw ContractError("proof sets were built for a different filtration");
  }
  // clean[A]: the path through A has stayed in U so far, where g~ = g - g_0.
  // After the first exit every increment is multiplied by the U flag.
  std::vector<std::vector<double>> values(static_cast<std::size_t>(depth) + 1);
  values[0].assign(filt.atoms(0), 0.0);
  std::vector<double> base(g.level(0).begin(), g.level(0).end());
  std::vector<std::uint8_t> clean(filt.atoms(0), 1);
  for (int n = 1; n <= depth; ++n) {
    const auto prev = g.level(n - 1);
    const auto cur = g.level(n);
    const auto& up = sets.U_atoms[n - 1];
    std::vector<double> next_base(filt.atoms(n));
    std::vector<std::uint8_t> next_clean(filt.atoms(n));
    values[n].resize(filt.atoms(n));
    for (std::size_t a = 0; a < filt.atoms(n); ++a) {
      const auto p = filt.parent(n, a);
      next_base[a] = base[p];
      next_clean[a] = clean[p] && up[p];
      if (next_clean[a]) {
        values[n][a] = cur[a] - base[p];
      } else if (up[p]) {
        values[n][a] = values[n - 1][p] + (cur[a] - prev[p]);
      } else {
        values[n][a] = values[n - 1][p];
      }
    }
    base = std::move(next_base);
    clean = std::move(next_clean);
  }
  return Martingale(g.filtration_ptr(), std::move(values));
}

}  // namespace mgvar
