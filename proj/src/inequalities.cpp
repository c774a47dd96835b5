#include "mgvar/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mgvar/errors.hpp"
#include "mgvar/operators.hpp"
#include "mgvar/paths.hpp"

namespace mgvar {

namespace {

constexpr double kSlack = 1e-12;
constexpr double kRelTol = 1e-9;

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw ParameterError("delta must lie in (0, 1/2)");
}

void require_r_above_two(double r) {
  if (!(r > 2.0) || !std::isfinite(r)) throw ParameterError("r must be a finite number > 2");
}

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be positive and finite");
}

// C * measure, with 0 * inf = 0 so an unbounded budget only fails on a
// nonempty event.
double scaled_measure(double c, double measure) { return measure == 0.0 ? 0.0 : c * measure; }

struct GoodLambdaParts {
  double joint = 0.0;
  double s_tail = 0.0;
  double v_tail = 0.0;
};

GoodLambdaParts good_lambda_parts(std::span<const double> mu, const OperatorFields& fields, double delta,
                                  double lambda) {
  const double v_cut = 3.0 * lambda;
  const double m_cut = delta * lambda;
  GoodLambdaParts parts;
  for (std::size_t c = 0; c < mu.size(); ++c) {
    if (fields.V[c] > v_cut && fields.M[c] <= m_cut) parts.joint += mu[c];
    if (fields.s[c] > m_cut) parts.s_tail += mu[c];
    if (fields.V[c] > lambda) parts.v_tail += mu[c];
  }
  return parts;
}

// sup over a of a * nu{field >= a}, i.e. sup_a a nu{field > a} approached from below.
double weak_type_sup(std::span<const double> field, const Filtration& filtration) {
  const auto mu = filtration.cell_measure();
  std::vector<std::size_t> order(field.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return field[a] > field[b]; });
  double mass = 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    mass += mu[order[i]];
    const bool last_of_value = i + 1 == order.size() || field[order[i + 1]] != field[order[i]];
    if (last_of_value && field[order[i]] > 0.0) best = std::max(best, field[order[i]] * mass);
  }
  return best;
}

VerificationReport ratio_report(std::string name, double lhs, double rhs) {
  VerificationReport rep;
  rep.name = std::move(name);
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.empirical_constant = ratio_constant(lhs, rhs);
  rep.pass = true;
  return rep;
}

}  // namespace

OperatorFields operator_fields(const Martingale& f, double r) {
  OperatorFields out;
  out.r = r;
  out.V = variation_pointwise(f, r);
  out.M = maximal(f);
  out.s = conditional_square(f);
  return out;
}

VerificationReport verify_good_lambda(const Filtration& filtration, const OperatorFields& fields, double delta,
                                      double lambda, double c_budget) {
  require_delta(delta);
  require_r_above_two(fields.r);
  require_lambda(lambda);
  if (!(c_budget >= 0.0)) throw ParameterError("C_budget must be nonnegative");
  const auto parts = good_lambda_parts(filtration.cell_measure(), fields, delta, lambda);
  const double coeff = delta * delta / ((fields.r - 2.0) * (fields.r - 2.0));
  VerificationReport rep;
  rep.name = "good_lambda";
  rep.lhs = scaled_measure(c_budget, parts.joint);
  rep.rhs = parts.s_tail + coeff * parts.v_tail;
  rep.empirical_constant = ratio_constant(parts.joint, rep.rhs);
  rep.pass = rep.lhs <= rep.rhs + kSlack;
  rep.params = {{"delta", delta},         {"r", fields.r},
                {"lambda", lambda},       {"C_budget", c_budget},
                {"joint", parts.joint},   {"s_tail", parts.s_tail},
                {"v_tail", parts.v_tail}, {"tolerance", kSlack}};
  return rep;
}

VerificationReport verify_good_lambda(const Martingale& f, double delta, double r, double lambda,
                                      double c_budget) {
  require_r_above_two(r);
  return verify_good_lambda(f.filtration(), operator_fields(f, r), delta, lambda, c_budget);
}

LambdaSup good_lambda_sup(const Filtration& filtration, const OperatorFields& fields, double delta) {
  require_delta(delta);
  require_r_above_two(fields.r);
  std::vector<double> ends;
  for (std::size_t c = 0; c < fields.V.size(); ++c) {
    const double lo = fields.M[c] / delta;
    const double hi = fields.V[c] / 3.0;
    if (lo < hi) {
      if (lo > 0.0) ends.push_back(lo);
      ends.push_back(hi);
    }
  }
  LambdaSup best;
  if (ends.empty()) return best;
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());

  std::vector<double> candidates;
  candidates.reserve(ends.size() * 3);
  for (std::size_t i = 0; i < ends.size(); ++i) {
    candidates.push_back(ends[i]);
    candidates.push_back(std::nextafter(ends[i], 0.0));
    if (i + 1 < ends.size()) candidates.push_back(0.5 * (ends[i] + ends[i + 1]));
  }
  // Pieces with M = 0 start at lambda -> 0+.
  candidates.push_back(0.5 * ends.front());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const double coeff = delta * delta / ((fields.r - 2.0) * (fields.r - 2.0));
  const auto mu = filtration.cell_measure();
  for (double lambda : candidates) {
    if (!(lambda > 0.0)) continue;
    ++best.candidates;
    const auto parts = good_lambda_parts(mu, fields, delta, lambda);
    const double k = ratio_constant(parts.joint, parts.s_tail + coeff * parts.v_tail);
    if (k > best.constant) {
      best.constant = k;
      best.lambda = lambda;
    }
  }
  return best;
}

std::vector<double> quantile_grid(std::span<const double> field, const Filtration& filtration,
                                  std::span<const double> levels) {
  const auto mu = filtration.cell_measure();
  std::vector<std::size_t> order(field.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return field[a] < field[b]; });
  const double total = filtration.total_measure();
  std::vector<double> out;
  for (double q : levels) {
    if (!(q > 0.0 && q < 1.0)) throw ParameterError("quantile levels must lie in (0, 1)");
    double mass = 0.0;
    for (std::size_t idx : order) {
      mass += mu[idx];
      if (mass >= q * total) {
        if (field[idx] > 0.0) out.push_back(field[idx]);
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) out.push_back(1.0);
  return out;
}

VerificationReport verify_lemma_weak(const Martingale& f, const OperatorFields& fields, const CellSet& A, int m,
                                     double lambda, double delta, double c_budget) {
  require_delta(delta);
  require_r_above_two(fields.r);
  require_lambda(lambda);
  if (!(c_budget >= 0.0)) throw ParameterError("C_budget must be nonnegative");
  const auto& filt = f.filtration();
  const double r = fields.r;
  if (m < 0 || m > filt.depth()) throw ParameterError("level m outside 0..depth");
  if (A.size() != filt.cells()) throw PreconditionError("set A does not match the cell count");
  if (!is_union_of_atoms(A, m, filt)) {
    throw PreconditionError("set A is not a union of level-" + std::to_string(m) + " atoms");
  }
  const auto members = A.members();
  for (int n = 0; n <= m; ++n) {
    for (std::size_t c : members) {
      if (f.value(n, c) != 0.0) {
        throw PreconditionError("f_" + std::to_string(n) + " does not vanish on A (level " + std::to_string(n) +
                                " <= m = " + std::to_string(m) + ")");
      }
    }
  }
  const auto mu = filt.cell_measure();
  double joint = 0.0;
  double energy = 0.0;
  const double m_cut = delta * lambda;
  for (std::size_t c : members) {
    if (fields.V[c] > lambda && fields.M[c] <= m_cut) joint += mu[c];
    const double x = f.value(filt.depth(), c);
    energy += mu[c] * x * x;
  }
  VerificationReport rep;
  rep.name = "lemma_weak";
  rep.lhs = scaled_measure(c_budget, joint);
  rep.rhs = energy / (lambda * lambda * (r - 2.0) * (r - 2.0));
  rep.empirical_constant = ratio_constant(joint, rep.rhs);
  rep.pass = rep.lhs <= rep.rhs + kSlack;
  rep.params = {{"delta", delta},   {"r", r},         {"lambda", lambda}, {"C_budget", c_budget},
                {"m", double(m)},   {"joint", joint}, {"measure_A", measure(A, filt)},
                {"tolerance", kSlack}};
  return rep;
}

VerificationReport verify_lemma_weak(const Martingale& f, const CellSet& A, int m, double r, double lambda,
                                     double delta, double c_budget) {
  require_r_above_two(r);
  OperatorFields fields;
  fields.r = r;
  fields.V = variation_pointwise(f, r);
  fields.M = maximal(f);
  return verify_lemma_weak(f, fields, A, m, lambda, delta, c_budget);
}

ProofChainInputs proof_chain_inputs(const Martingale& f, double r) {
  require_r_above_two(r);
  const auto& filt = f.filtration();
  const auto prefix = prefix_variation_table(f, r);
  std::vector<double> full(prefix.rows());
  for (std::size_t i = 0; i < prefix.rows(); ++i) full[i] = prefix.row(i)[prefix.length() - 1];
  auto sigma = first_variation_exceed(filt, prefix, 1.0);
  auto g = stopped_tail(f, sigma);
  auto M_g = maximal(g);
  return ProofChainInputs{&f,
                          r,
                          conditional_square(f),
                          maximal(f),
                          row_field(filt, full),
                          std::move(sigma),
                          std::move(g),
                          std::move(M_g)};
}

std::vector<VerificationReport> verify_proof_chain(const ProofChainInputs& in, double delta) {
  require_delta(delta);
  const Martingale& f = *in.f;
  const auto& filt = f.filtration();
  const auto mu = filt.cell_measure();
  const int depth = filt.depth();
  const std::size_t cells = filt.cells();
  const auto sets = proof_sets(f, in.s_f, delta);
  const auto base = [&](VerificationReport& rep) {
    rep.params["delta"] = delta;
    rep.params["r"] = in.r;
    rep.params["lambda"] = 1.0;
  };
  std::vector<VerificationReport> out;

  {
    const double nu_b = measure(sets.B, filt);
    const double nu_star = measure(sets.B_star, filt);
    auto rep = ratio_report("proof_chain.doob", nu_star, nu_b);
    rep.pass = nu_star <= 4.0 * nu_b + kSlack;
    base(rep);
    rep.params["factor"] = 4.0;
    out.push_back(std::move(rep));
  }

  {
    // V_r(g) is only needed on the left-hand event; evaluate it per finest atom on demand.
    const auto g_paths = in.g.paths();
    std::vector<double> v_g(filt.atoms(depth), -1.0);
    double left = 0.0;
    double kept = 0.0;
    std::size_t violations = 0;
    for (std::size_t c = 0; c < cells; ++c) {
      if (!(in.V_f[c] > 3.0 && in.M_f[c] < delta && sets.G.contains(c))) continue;
      left += mu[c];
      const auto row = filt.atom_of(depth, c);
      if (v_g[row] < 0.0) v_g[row] = variation_pruned(g_paths.row(row), in.r).value;
      if (v_g[row] > 1.0 && in.M_g[c] < 2.0 * delta) {
        kept += mu[c];
      } else {
        ++violations;
      }
    }
    auto rep = ratio_report("proof_chain.containment", left, kept);
    rep.pass = violations == 0;
    base(rep);
    rep.params["violations"] = double(violations);
    out.push_back(std::move(rep));
  }

  const Martingale gt = truncated_transform(in.g, sets);
  {
    double worst = 0.0;
    std::size_t g_outside_u = 0;
    for (int n = 0; n <= depth; ++n) {
      if (!sets.G.subset_of(sets.U[n])) ++g_outside_u;
    }
    for (std::size_t c = 0; c < cells; ++c) {
      if (!sets.G.contains(c)) continue;
      const double g0 = in.g.value(0, c);
      for (int k = 0; k <= depth; ++k) {
        const double diff = std::fabs(gt.value(k, c) - (in.g.value(k, c) - g0));
        worst = std::max(worst, diff);
      }
    }
    const double residual = gt.residual();
    auto rep = ratio_report("proof_chain.transform", worst, residual);
    rep.pass = worst == 0.0 && residual <= 1e-10 && g_outside_u == 0;
    base(rep);
    rep.params["max_abs_difference_on_G"] = worst;
    rep.params["residual"] = residual;
    rep.params["levels_with_G_outside_U"] = double(g_outside_u);
    out.push_back(std::move(rep));
  }

  // Per-m integrals.  Left: int_{sigma=m} g~_N^2 from the transformed martingale.
  // Right: sum_n int_{sigma=m} E[|g_n - g_{n-1}|^2 | F_{n-1}] 1_{U_{n-1}}, from g and the U flags.
  const int never = in.sigma.never;
  std::vector<double> left(never + 1, 0.0), right(never + 1, 0.0), mass(never + 1, 0.0);
  std::vector<std::vector<double>> cond(depth);
  for (int n = 1; n <= depth; ++n) {
    auto& level = cond[n - 1];
    level.assign(filt.atoms(n - 1), 0.0);
    const auto prev = in.g.level(n - 1);
    const auto cur = in.g.level(n);
    for (std::size_t a = 0; a < filt.atoms(n - 1); ++a) {
      if (!sets.U_atoms[n - 1][a]) continue;
      double acc = 0.0;
      for (auto child : filt.children(n - 1, a)) {
        const double d = cur[child] - prev[a];
        acc += filt.atom_measure(n, child) * d * d;
      }
      level[a] = acc / filt.atom_measure(n - 1, a);
    }
  }
  for (std::size_t c = 0; c < cells; ++c) {
    const int m = in.sigma.level[c];
    const double x = gt.value(depth, c);
    left[m] += mu[c] * x * x;
    double acc = 0.0;
    for (int n = 1; n <= depth; ++n) acc += cond[n - 1][filt.atom_of(n - 1, c)];
    right[m] += mu[c] * acc;
    mass[m] += mu[c];
  }

  {
    double worst = 0.0;
    int worst_m = 0;
    for (int m = 0; m <= never; ++m) {
      const double gap = relative_gap(left[m], right[m]);
      if (gap > worst) {
        worst = gap;
        worst_m = m;
      }
    }
    auto rep = ratio_report("proof_chain.l2_identity", left[worst_m], right[worst_m]);
    rep.pass = worst <= kRelTol;
    base(rep);
    rep.params["m"] = worst_m;
    rep.params["relative_gap"] = worst;
    out.push_back(std::move(rep));
  }

  {
    const double factor = 2.0 * delta * delta;
    double worst = -1.0;
    int worst_m = 0;
    bool ok = true;
    for (int m = 0; m <= never; ++m) {
      const double bound = factor * mass[m];
      if (left[m] > bound * (1.0 + kRelTol)) ok = false;
      const double k = ratio_constant(left[m], bound);
      if (k > worst) {
        worst = k;
        worst_m = m;
      }
    }
    auto rep = ratio_report("proof_chain.final_bound", left[worst_m], factor * mass[worst_m]);
    rep.pass = ok;
    base(rep);
    rep.params["m"] = worst_m;
    rep.params["sigma_never"] = never;
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<VerificationReport> verify_proof_chain(const Martingale& f, double delta, double r) {
  require_delta(delta);
  return verify_proof_chain(proof_chain_inputs(f, r), delta);
}

VerificationReport lepingle_ratio(const Martingale& f, double p, double r) {
  if (!(p >= 1.0)) throw ParameterError("p must be >= 1");
  require_r_above_two(r);
  const auto& filt = f.filtration();
  const auto V = variation_pointwise(f, r);
  const auto terminal = terminal_field(f);
  const double lhs = p > 1.0 ? lp_norm(V, filt, p) : weak_type_sup(V, filt);
  auto rep = ratio_report("lepingle", lhs, lp_norm(terminal, filt, p));
  rep.params = {{"p", p}, {"r", r}};
  return rep;
}

VerificationReport jump_ratio(const Martingale& f, double p, std::span<const double> lambdas) {
  if (!(p >= 1.0)) throw ParameterError("p must be >= 1");
  if (lambdas.empty()) throw ParameterError("jump experiment needs a lambda grid");
  const auto& filt = f.filtration();
  const double denom = lp_norm(terminal_field(f), filt, p);
  double best = -1.0;
  double best_lhs = 0.0;
  double best_lambda = lambdas.front();
  for (double lambda : lambdas) {
    require_lambda(lambda);
    auto field = jump_pointwise(f, lambda);
    for (double& v : field) v = lambda * std::sqrt(v);
    const double lhs = p > 1.0 ? lp_norm(field, filt, p) : weak_type_sup(field, filt);
    const double k = ratio_constant(lhs, denom);
    if (k > best) {
      best = k;
      best_lhs = lhs;
      best_lambda = lambda;
    }
  }
  auto rep = ratio_report("jumps", best_lhs, denom);
  rep.params = {{"p", p}, {"lambda", best_lambda}, {"grid_size", double(lambdas.size())}};
  return rep;
}

std::vector<VerificationReport> bdg_ratios(const Martingale& f, double p) {
  if (!(p >= 1.0)) throw ParameterError("p must be >= 1");
  const auto& filt = f.filtration();
  const double m = lp_norm(maximal(f), filt, p);
  const double big_s = lp_norm(square(f), filt, p);
  const double small_s = lp_norm(conditional_square(f), filt, p);
  std::vector<VerificationReport> out;
  out.push_back(ratio_report("bdg.M_over_S", m, big_s));
  out.push_back(ratio_report("bdg.S_over_M", big_s, m));
  if (p >= 2.0) {
    out.push_back(ratio_report("bdg.s_over_S", small_s, big_s));
  } else {
    out.push_back(ratio_report("bdg.M_over_s", m, small_s));
  }
  for (auto& rep : out) rep.params = {{"p", p}};
  return out;
}

ExperimentSummary summarize(const std::string& name, std::span<const VerificationReport> reports,
                            std::size_t excluded) {
  ExperimentSummary out;
  out.name = name;
  out.excluded = excluded;
  double total = 0.0;
  for (const auto& rep : reports) {
    if (rep.name != name) continue;
    ++out.trials;
    out.max_ratio = std::max(out.max_ratio, rep.empirical_constant);
    total += rep.empirical_constant;
  }
  out.mean_ratio = out.trials ? total / double(out.trials) : 0.0;
  return out;
}

GrowthCurve lepingle_growth(std::span<const Martingale> trials, double p, std::span<const double> r_grid) {
  GrowthCurve curve;
  for (double r : r_grid) {
    double best = 0.0;
    for (const auto& f : trials) {
      if (f.identically_zero()) continue;
      best = std::max(best, lepingle_ratio(f, p, r).empirical_constant);
    }
    curve.r.push_back(r);
    curve.max_ratio.push_back(best);
  }
  double xy = 0.0, xx = 0.0;
  for (std::size_t i = 0; i < curve.r.size(); ++i) {
    const double x = curve.r[i] / (curve.r[i] - 2.0);
    xy += x * curve.max_ratio[i];
    xx += x * x;
  }
  curve.coefficient = xx > 0.0 ? xy / xx : 0.0;
  std::vector<std::size_t> order(curve.r.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return curve.r[a] < curve.r[b]; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const double prev = curve.max_ratio[order[i - 1]];
    if (curve.max_ratio[order[i]] > prev * (1.0 + kRelTol)) curve.nonincreasing = false;
  }
  return curve;
}

json to_json(const ExperimentSummary& summary) {
  return {{"name", summary.name},
          {"trials", summary.trials},
          {"excluded", summary.excluded},
          {"max_ratio", number_to_json(summary.max_ratio)},
          {"mean_ratio", number_to_json(summary.mean_ratio)}};
}

json to_json(const GrowthCurve& curve) {
  json ratios = json::array();
  for (double x : curve.max_ratio) ratios.push_back(number_to_json(x));
  return {{"r", curve.r},
          {"max_ratio", ratios},
          {"coefficient", number_to_json(curve.coefficient)},
          {"nonincreasing", curve.nonincreasing}};
}

}  // namespace mgvar
