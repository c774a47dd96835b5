#include "mgvar/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mgvar/errors.hpp"

namespace mgvar {

Martingale::Martingale(std::shared_ptr<const Filtration> filtration,
                       std::vector<std::vector<double>> values)
    : filtration_(std::move(filtration)), values_(std::move(values)) {
  if (!filtration_) throw ParameterError("martingale needs a filtration");
  if (values_.size() != static_cast<std::size_t>(filtration_->depth()) + 1) {
    throw ParameterError("martingale has " + std::to_string(values_.size()) + " levels, filtration has " +
                         std::to_string(filtration_->depth() + 1));
  }
  for (int n = 0; n <= filtration_->depth(); ++n) {
    if (values_[n].size() != filtration_->atoms(n)) {
      throw ParameterError("martingale level " + std::to_string(n) + " has " +
                           std::to_string(values_[n].size()) + " values for " +
                           std::to_string(filtration_->atoms(n)) + " atoms");
    }
  }
}

PointwiseField Martingale::level_field(int n) const {
  const auto& f = *filtration_;
  PointwiseField out(f.cells());
  for (std::size_t a = 0; a < f.atoms(n); ++a) {
    for (CellIndex c : f.atom_cells(n, a)) out[c] = values_[n][a];
  }
  return out;
}

PathTable Martingale::paths() const {
  const auto& f = *filtration_;
  const int depth = f.depth();
  PathTable table(f.atoms(depth), static_cast<std::size_t>(depth) + 1);
  for (std::size_t a = 0; a < table.rows(); ++a) {
    auto row = table.row(a);
    std::size_t atom = a;
    row[depth] = values_[depth][atom];
    for (int n = depth; n >= 1; --n) {
      atom = f.parent(n, atom);
      row[n - 1] = values_[n - 1][atom];
    }
  }
  return table;
}

double Martingale::residual() const {
  const auto& f = *filtration_;
  double sup = 0.0;
  for (const auto& level : values_) {
    for (double v : level) sup = std::max(sup, std::fabs(v));
  }
  if (sup == 0.0) return 0.0;
  double worst = 0.0;
  for (int n = 0; n < f.depth(); ++n) {
    for (std::size_t a = 0; a < f.atoms(n); ++a) {
      double mass = 0.0;
      for (auto child : f.children(n, a)) mass += f.atom_measure(n + 1, child) * values_[n + 1][child];
      const double parent = f.atom_measure(n, a);
      worst = std::max(worst, std::fabs(mass - parent * values_[n][a]) / (parent * sup));
    }
  }
  return worst;
}

bool Martingale::identically_zero() const {
  for (const auto& level : values_) {
    for (double v : level) {
      if (v != 0.0) return false;
    }
  }
  return true;
}

Martingale from_terminal(std::shared_ptr<const Filtration> filtration, std::span<const double> terminal) {
  const auto& f = *filtration;
  if (terminal.size() != f.cells()) throw ParameterError("terminal field length does not match cell count");
  const int depth = f.depth();
  std::vector<std::vector<double>> values(static_cast<std::size_t>(depth) + 1);
  const auto mu = f.cell_measure();
  values[depth].resize(f.atoms(depth));
  for (std::size_t a = 0; a < f.atoms(depth); ++a) {
    double acc = 0.0;
    for (CellIndex c : f.atom_cells(depth, a)) acc += mu[c] * terminal[c];
    values[depth][a] = acc / f.atom_measure(depth, a);
  }
  for (int n = depth - 1; n >= 0; --n) {
    values[n].resize(f.atoms(n));
    for (std::size_t a = 0; a < f.atoms(n); ++a) {
      double acc = 0.0;
      for (auto child : f.children(n, a)) acc += f.atom_measure(n + 1, child) * values[n + 1][child];
      values[n][a] = acc / f.atom_measure(n, a);
    }
  }
  return Martingale(std::move(filtration), std::move(values));
}

Martingale scaled(const Martingale& f, double factor) {
  auto values = f.values();
  for (auto& level : values) {
    for (double& v : level) v *= factor;
  }
  return Martingale(f.filtration_ptr(), std::move(values));
}

PointwiseField terminal_field(const Martingale& f) { return f.level_field(f.depth()); }

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::terminal_gaussian: return "terminal_gaussian";
    case GeneratorKind::uniform_terminal: return "uniform_terminal";
    case GeneratorKind::dyadic_rademacher: return "dyadic_rademacher";
    case GeneratorKind::reflecting: return "reflecting";
  }
  return "unknown";
}

GeneratorKind generator_from_string(const std::string& name) {
  if (name == "terminal_gaussian" || name == "gaussian") return GeneratorKind::terminal_gaussian;
  if (name == "uniform_terminal" || name == "uniform") return GeneratorKind::uniform_terminal;
  if (name == "dyadic_rademacher" || name == "rademacher") return GeneratorKind::dyadic_rademacher;
  if (name == "reflecting") return GeneratorKind::reflecting;
  throw ParameterError("unknown generator '" + name + "'");
}

namespace {

double draw_scale(const GeneratorSpec& spec, std::mt19937_64& rng) {
  if (!(spec.scale_min > 0.0) || spec.scale_max < spec.scale_min) {
    throw ParameterError("generator scale range needs 0 < scale_min <= scale_max");
  }
  if (spec.scale_min == spec.scale_max) return spec.scale_min;
  std::uniform_real_distribution<double> u(std::log(spec.scale_min), std::log(spec.scale_max));
  return std::exp(u(rng));
}

Martingale rademacher(std::shared_ptr<const Filtration> filtration, const GeneratorSpec& spec,
                      double scale, std::mt19937_64& rng) {
  const auto& f = *filtration;
  if (!f.equal_binary_splits()) {
    throw ParameterError("dyadic_rademacher needs a filtration with equal-measure binary splits");
  }
  const int depth = f.depth();
  if (!spec.schedule.empty() && spec.schedule.size() < static_cast<std::size_t>(depth)) {
    throw ParameterError("rademacher schedule shorter than the filtration depth");
  }
  std::bernoulli_distribution coin(0.5);
  std::vector<std::vector<double>> values(static_cast<std::size_t>(depth) + 1);
  values[0].assign(f.atoms(0), 0.0);
  for (int n = 1; n <= depth; ++n) {
    const double step = scale * (spec.schedule.empty() ? 1.0 : spec.schedule[n - 1]);
    values[n].assign(f.atoms(n), 0.0);
    for (std::size_t p = 0; p < f.atoms(n - 1); ++p) {
      const auto kids = f.children(n - 1, p);
      const double x = values[n - 1][p];
      if (kids.size() == 1) {
        values[n][kids[0]] = x;
        continue;
      }
      const double sign = coin(rng) ? 1.0 : -1.0;
      values[n][kids[0]] = x + sign * step;
      values[n][kids[1]] = x - sign * step;
    }
  }
  return Martingale(std::move(filtration), std::move(values));
}

Martingale reflecting(std::shared_ptr<const Filtration> filtration, const GeneratorSpec& spec,
                      double scale, std::mt19937_64& rng) {
  const auto& f = *filtration;
  if (!(spec.amplitude_floor > 0.0) || spec.amplitude_floor > 1.0) {
    throw ParameterError("reflecting generator needs amplitude_floor in (0, 1]");
  }
  std::uniform_real_distribution<double> amplitude(spec.amplitude_floor, 1.0);
  std::bernoulli_distribution coin(0.5);
  const int depth = f.depth();
  std::vector<std::vector<double>> values(static_cast<std::size_t>(depth) + 1);
  for (std::size_t a = 0; a < f.atoms(0); ++a) {
    values[0].push_back((coin(rng) ? 1.0 : -1.0) * scale * amplitude(rng));
  }
  for (int n = 1; n <= depth; ++n) {
    values[n].assign(f.atoms(n), 0.0);
    for (std::size_t p = 0; p < f.atoms(n - 1); ++p) {
      const auto kids = f.children(n - 1, p);
      const double x = values[n - 1][p];
      if (kids.size() == 1) {
        values[n][kids[0]] = x;
        continue;
      }
      if (kids.size() != 2) throw ParameterError("reflecting generator needs binary splits");
      const double m0 = f.atom_measure(n, kids[0]);
      const double m1 = f.atom_measure(n, kids[1]);
      const auto big = m1 > m0 ? kids[1] : kids[0];
      const auto small = m1 > m0 ? kids[0] : kids[1];
      const double side = x > 0 ? -1.0 : (x < 0 ? 1.0 : (coin(rng) ? 1.0 : -1.0));
      const double y = side * scale * amplitude(rng);
      values[n][big] = y;
      values[n][small] = (f.atom_measure(n - 1, p) * x - f.atom_measure(n, big) * y) / f.atom_measure(n, small);
    }
  }
  return Martingale(std::move(filtration), std::move(values));
}

}  // namespace

Martingale random_martingale(std::shared_ptr<const Filtration> filtration, const GeneratorSpec& spec,
                             std::uint64_t seed) {
  if (!filtration) throw ParameterError("random_martingale needs a filtration");
  std::mt19937_64 rng(seed);
  const double scale = draw_scale(spec, rng);
  switch (spec.kind) {
    case GeneratorKind::terminal_gaussian: {
      std::normal_distribution<double> normal(0.0, 1.0);
      PointwiseField terminal(filtration->cells());
      for (double& v : terminal) v = scale * normal(rng);
      return from_terminal(std::move(filtration), terminal);
    }
    case GeneratorKind::uniform_terminal: {
      std::uniform_real_distribution<double> uniform(-1.0, 1.0);
      PointwiseField terminal(filtration->cells());
      for (double& v : terminal) v = scale * uniform(rng);
      return from_terminal(std::move(filtration), terminal);
    }
    case GeneratorKind::dyadic_rademacher:
      return rademacher(std::move(filtration), spec, scale, rng);
    case GeneratorKind::reflecting:
      return reflecting(std::move(filtration), spec, scale, rng);
  }
  throw ParameterError("unknown generator");
}

}  // namespace mgvar
