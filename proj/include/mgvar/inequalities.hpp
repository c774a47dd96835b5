#pragma once

#include <span>
#include <string>
#include <vector>

#include "mgvar/cell_set.hpp"
#include "mgvar/martingale.hpp"
#include "mgvar/report.hpp"
#include "mgvar/stopping.hpp"

namespace mgvar {

/// Pointwise fields shared by the good-lambda verifiers for one (f, r).
struct OperatorFields {
  double r = 0.0;
  PointwiseField V;  // V_r(f)
  PointwiseField M;  // M(f)
  PointwiseField s;  // s(f)
};

OperatorFields operator_fields(const Martingale& f, double r);

// ---------------------------------------------------------------------------
// Good-lambda inequality
//
//   C nu{V_r > 3 lambda, M <= delta lambda}
//       <= nu{s > delta lambda} + delta^2 / (r-2)^2 nu{V_r > lambda}
//
// The report carries lhs = C * joint and the right-hand side.  Its
// empirical_constant is K = joint / rhs, so the inequality holds with C
// exactly when C * K <= 1; calibration therefore tracks sup K and sets
// C = 1 / sup K.  The joint measure is kept in params["joint"].  C = 0 is
// accepted (it always passes) and C = +inf fails on any nonempty joint event.
// ---------------------------------------------------------------------------

VerificationReport verify_good_lambda(const Martingale& f, double delta, double r, double lambda,
                                      double c_budget);

VerificationReport verify_good_lambda(const Filtration& filtration, const OperatorFields& fields,
                                      double delta, double lambda, double c_budget);

struct LambdaSup {
  double constant = 0.0;  // sup K over the candidate set
  double lambda = 1.0;    // maximizer (1 when every candidate gives 0)
  std::size_t candidates = 0;
};

/// sup over lambda > 0 of K(lambda).  Row by row the joint event is the
/// interval M/delta <= lambda < V/3, so the numerator is piecewise constant
/// between those endpoints while the denominator is nonincreasing in lambda;
/// the sup over each piece is approached at its right end.  Candidates are
/// the active endpoints, their floating-point predecessors and the midpoints
/// between neighbours, each evaluated with the predicates of
/// verify_good_lambda.
LambdaSup good_lambda_sup(const Filtration& filtration, const OperatorFields& fields, double delta);

/// Measure-weighted quantiles of `field` at the given levels; values that
/// are not positive are dropped.  Falls back to {1} if nothing remains.
std::vector<double> quantile_grid(std::span<const double> field, const Filtration& filtration,
                                  std::span<const double> levels);

// ---------------------------------------------------------------------------
// Weak-type lemma on an F_m set A with f_n 1_A = 0 for n <= m:
//   C nu{A, V_r > lambda, M <= delta lambda} <= lambda^-2 (r-2)^-2 int_A f_N^2
// Same K-form bookkeeping as the good-lambda report.
// ---------------------------------------------------------------------------

/// Throws PreconditionError when A is not a union of level-m atoms or when
/// some f_n with n <= m is nonzero on A (the message names the level).
VerificationReport verify_lemma_weak(const Martingale& f, const CellSet& A, int m, double r,
                                     double lambda, double delta, double c_budget);

/// Same, with V_r(f) and M(f) taken from `fields` (s is not used).
VerificationReport verify_lemma_weak(const Martingale& f, const OperatorFields& fields, const CellSet& A, int m,
                                     double lambda, double delta, double c_budget);

// ---------------------------------------------------------------------------
// Proof chain at lambda = 1.
// ---------------------------------------------------------------------------

/// Quantities that depend on (f, r) but not on delta.
struct ProofChainInputs {
  const Martingale* f = nullptr;
  double r = 0.0;
  PointwiseField s_f;
  PointwiseField M_f;
  PointwiseField V_f;
  StoppingTime sigma;  // first time the prefix variation exceeds 1
  Martingale g;        // f - f_{n ∧ sigma}
  PointwiseField M_g;
};

ProofChainInputs proof_chain_inputs(const Martingale& f, double r);

/// Five reports, in order:
///   proof_chain.doob         nu(B*) <= 4 nu(B)
///   proof_chain.containment  {V(f) > 3, M(f) < delta, G} ⊆ {V(g) > 1, M(g) < 2 delta, G}
///   proof_chain.transform    g~ = g - g_0 on G bit-for-bit, g~ residual <= 1e-10
///   proof_chain.l2_identity  int_{sigma=m} g~_N^2 = sum_n int_{sigma=m} E[|d~_n|^2 | F_{n-1}]
///   proof_chain.final_bound  int_{sigma=m} g~_N^2 <= 2 delta^2 nu{sigma = m}
/// The last two are checked for every m; the report shows the worst m.
std::vector<VerificationReport> verify_proof_chain(const ProofChainInputs& inputs, double delta);

std::vector<VerificationReport> verify_proof_chain(const Martingale& f, double delta, double r);

// ---------------------------------------------------------------------------
// Constant experiments.  Per-trial reports are data (pass is always true);
// empirical_constant is the trial's ratio.
// ---------------------------------------------------------------------------

/// p > 1: ||V_r||_p / ||f_N||_p.  p = 1: sup_lambda lambda nu{V_r > lambda} / ||f_N||_1.
VerificationReport lepingle_ratio(const Martingale& f, double p, double r);

/// p > 1: max over the grid of ||lambda N_lambda^{1/2}||_p / ||f_N||_p.
/// p = 1: max over the grid of sup_a a nu{lambda N_lambda^{1/2} > a} / ||f_N||_1.
VerificationReport jump_ratio(const Martingale& f, double p, std::span<const double> lambdas);

/// ||M||_p / ||S||_p, ||S||_p / ||M||_p, and ||s||_p / ||S||_p (p >= 2) or
/// ||M||_p / ||s||_p (p < 2).  Constant trials give zero ratios.
std::vector<VerificationReport> bdg_ratios(const Martingale& f, double p);

struct ExperimentSummary {
  std::string name;
  std::size_t trials = 0;
  std::size_t excluded = 0;  // identically zero martingales
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
};

/// Aggregates the empirical constants of per-trial reports with the given name.
ExperimentSummary summarize(const std::string& name, std::span<const VerificationReport> reports,
                            std::size_t excluded);

struct GrowthCurve {
  std::vector<double> r;
  std::vector<double> max_ratio;
  double coefficient = 0.0;  // least-squares a in max_ratio ~ a r / (r - 2)
  bool nonincreasing = true;  // within 1e-9 relative
};

/// Max Lepingle ratio over the same martingales at each r.
GrowthCurve lepingle_growth(std::span<const Martingale> trials, double p, std::span<const double> r_grid);

json to_json(const ExperimentSummary& summary);
json to_json(const GrowthCurve& curve);

}  // namespace mgvar
