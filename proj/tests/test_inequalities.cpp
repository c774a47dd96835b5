#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "mgvar/errors.hpp"
#include "mgvar/inequalities.hpp"
#include "mgvar/operators.hpp"

using namespace mgvar;

namespace {

std::shared_ptr<const Filtration> dyadic(int depth) {
  return std::make_shared<const Filtration>(Filtration::dyadic(depth));
}

Martingale rademacher(int depth, std::uint64_t seed, double scale = 1.0) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::dyadic_rademacher;
  spec.scale_min = spec.scale_max = scale;
  return random_martingale(dyadic(depth), spec, seed);
}

// Direct evaluation of the three good-lambda measures from the fields.
struct Parts {
  double joint = 0, s_tail = 0, v_tail = 0;
};

Parts direct_parts(const Filtration& filt, const OperatorFields& x, double delta, double lambda) {
  Parts p;
  for (std::size_t c = 0; c < filt.cells(); ++c) {
    const double mu = filt.cell_measure()[c];
    if (x.V[c] > 3 * lambda && x.M[c] <= delta * lambda) p.joint += mu;
    if (x.s[c] > delta * lambda) p.s_tail += mu;
    if (x.V[c] > lambda) p.v_tail += mu;
  }
  return p;
}

Martingale comb_reflecting(std::uint64_t seed) {
  auto filt = std::make_shared<const Filtration>(comb_filtration(40, 0.02, 0.1, seed));
  GeneratorSpec spec;
  spec.kind = GeneratorKind::reflecting;
  return random_martingale(filt, spec, seed);
}

}  // namespace

TEST(GoodLambda, ConstantMartingaleIsVacuous) {
  const auto f = from_terminal(dyadic(4), std::vector<double>(16, 1.0));
  const auto rep = verify_good_lambda(f, 0.25, 3.0, 1.0, 10.0);
  EXPECT_EQ(rep.lhs, 0.0);
  EXPECT_EQ(rep.rhs, 0.0);
  EXPECT_TRUE(rep.pass);
}

TEST(GoodLambda, LargeMaximalFunctionEmptiesJointEvent) {
  const auto f = rademacher(6, 1);
  // M >= |f_1| = 1 everywhere, so M > delta lambda for lambda < 4.
  const auto rep = verify_good_lambda(f, 0.25, 3.0, 2.0, 1e6);
  EXPECT_EQ(rep.lhs, 0.0);
  EXPECT_TRUE(rep.pass);
}

TEST(GoodLambda, RejectsBadParameters) {
  const auto f = rademacher(3, 1);
  EXPECT_THROW(verify_good_lambda(f, 0.6, 3.0, 1.0, 1.0), ParameterError);
  EXPECT_THROW(verify_good_lambda(f, 0.25, 2.0, 1.0, 1.0), ParameterError);
  EXPECT_THROW(verify_good_lambda(f, 0.25, 3.0, 0.0, 1.0), ParameterError);
  EXPECT_THROW(verify_good_lambda(f, 0.25, 3.0, 1.0, -1.0), ParameterError);
}

TEST(GoodLambda, MatchesDirectMeasuresAndBudgetSemantics) {
  std::size_t nonvacuous = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto f = comb_reflecting(seed);
    const auto x = operator_fields(f, 2.5);
    auto grid = quantile_grid(x.V, f.filtration(), std::vector<double>{0.5, 0.9});
    grid.push_back(good_lambda_sup(f.filtration(), x, 0.45).lambda);
    for (double lambda : grid) {
      const auto want = direct_parts(f.filtration(), x, 0.45, lambda);
      const auto rep = verify_good_lambda(f.filtration(), x, 0.45, lambda, 1.0);
      const double rhs = want.s_tail + 0.45 * 0.45 / 0.25 * want.v_tail;
      EXPECT_DOUBLE_EQ(rep.params.at("joint"), want.joint);
      EXPECT_NEAR(rep.rhs, rhs, 1e-15);
      EXPECT_EQ(rep.pass, want.joint <= rhs + 1e-12);
      // C = 0 always passes; C = inf fails exactly on a nonempty joint event.
      EXPECT_TRUE(verify_good_lambda(f.filtration(), x, 0.45, lambda, 0.0).pass);
      const bool inf_pass =
          verify_good_lambda(f.filtration(), x, 0.45, lambda, std::numeric_limits<double>::infinity()).pass;
      EXPECT_EQ(inf_pass, want.joint == 0.0);
      if (want.joint > 0) ++nonvacuous;
    }
  }
  EXPECT_GT(nonvacuous, 0u);
}

// The candidate sup dominates a dense sweep and is attained at its lambda.
TEST(GoodLambda, SupDominatesDenseSweep) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto f = comb_reflecting(seed);
    const auto x = operator_fields(f, 2.5);
    const auto sup = good_lambda_sup(f.filtration(), x, 0.45);
    const auto at = direct_parts(f.filtration(), x, 0.45, sup.lambda);
    const double k_at = ratio_constant(at.joint, at.s_tail + 0.81 * at.v_tail);
    EXPECT_DOUBLE_EQ(k_at, sup.constant);
    double vmax = 0.0;
    for (double v : x.V) vmax = std::max(vmax, v);
    for (int i = 1; i <= 2000; ++i) {
      const double lambda = vmax / 3.0 * i / 2000.0;
      const auto p = direct_parts(f.filtration(), x, 0.45, lambda);
      EXPECT_LE(ratio_constant(p.joint, p.s_tail + 0.81 * p.v_tail), sup.constant * (1 + 1e-12));
    }
  }
}

TEST(QuantileGrid, DropsNonPositiveAndFallsBack) {
  const auto filt = Filtration::dyadic(2);
  EXPECT_EQ(quantile_grid(std::vector<double>(4, 0.0), filt, std::vector<double>{0.5}), (std::vector<double>{1.0}));
  EXPECT_EQ(quantile_grid(std::vector<double>{1, 2, 3, 4}, filt, std::vector<double>{0.5, 0.9}),
            (std::vector<double>{2, 4}));
  EXPECT_THROW(quantile_grid(std::vector<double>{1, 2, 3, 4}, filt, std::vector<double>{1.0}), ParameterError);
}

TEST(Lemma, EmptySetAndPreconditions) {
  const auto f = rademacher(4, 2);
  const CellSet empty(16);
  const auto rep = verify_lemma_weak(f, empty, 2, 3.0, 1.0, 0.25, 1.0);
  EXPECT_EQ(rep.lhs, 0.0);
  EXPECT_EQ(rep.rhs, 0.0);
  EXPECT_TRUE(rep.pass);
  CellSet half(16);
  for (std::size_t c = 0; c < 8; ++c) half.insert(c);
  EXPECT_THROW(verify_lemma_weak(f, half, 1, 3.0, 1.0, 0.25, 1.0), PreconditionError);  // f_1 != 0 there
  CellSet ragged(16);
  ragged.insert(0);
  EXPECT_THROW(verify_lemma_weak(f, ragged, 2, 3.0, 1.0, 0.25, 1.0), PreconditionError);
}

TEST(Lemma, StoppedTailSatisfiesHypothesis) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto f = rademacher(8, seed, 0.3);
    const auto in = proof_chain_inputs(f, 3.0);
    const auto& filt = f.filtration();
    const auto V = variation_pointwise(in.g, 3.0);
    for (int m = 0; m <= f.depth(); ++m) {
      const auto A = in.sigma.at(m);
      const auto rep = verify_lemma_weak(in.g, A, m, 3.0, 0.5, 0.4, 2.0);
      double joint = 0.0;
      double energy = 0.0;
      for (std::size_t c : A.members()) {
        const double mu = filt.cell_measure()[c];
        if (V[c] > 0.5 && in.M_g[c] <= 0.2) joint += mu;
        energy += mu * std::pow(in.g.value(8, c), 2);
      }
      EXPECT_DOUBLE_EQ(rep.params.at("joint"), joint);
      EXPECT_EQ(rep.lhs, 2.0 * joint);
      EXPECT_NEAR(rep.rhs, energy / 0.25, 1e-12 * (1 + energy));
      EXPECT_EQ(rep.pass, rep.lhs <= rep.rhs + 1e-12);
      // delta lambda below the smallest positive M on A empties the joint event.
      const auto tiny = verify_lemma_weak(in.g, A, m, 3.0, 1e-12, 0.25, 1.0);
      EXPECT_EQ(tiny.params.at("joint"), 0.0);
    }
  }
}

TEST(ProofChain, ConstantMartingalePasses) {
  const auto f = from_terminal(dyadic(4), std::vector<double>(16, 0.5));
  for (const auto& rep : verify_proof_chain(f, 0.25, 3.0)) EXPECT_TRUE(rep.pass) << rep.name;
}

TEST(ProofChain, FiveStepsPassOnRandomTrials) {
  const std::vector<std::string> names{"proof_chain.doob", "proof_chain.containment", "proof_chain.transform",
                                       "proof_chain.l2_identity", "proof_chain.final_bound"};
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    GeneratorSpec spec;
    spec.kind = seed % 2 ? GeneratorKind::terminal_gaussian : GeneratorKind::dyadic_rademacher;
    spec.scale_min = 0.02;
    spec.scale_max = 2.0;
    const auto f = random_martingale(dyadic(8), spec, seed);
    const auto in = proof_chain_inputs(f, 2.5 + seed % 3 * 0.5);
    for (double delta : {0.1, 0.25, 0.4}) {
      const auto reps = verify_proof_chain(in, delta);
      ASSERT_EQ(reps.size(), names.size());
      for (std::size_t i = 0; i < reps.size(); ++i) {
        EXPECT_EQ(reps[i].name, names[i]);
        EXPECT_TRUE(reps[i].pass) << reps[i].name << " seed " << seed << " delta " << delta;
      }
    }
  }
}

TEST(ProofChain, DoobStepOnSingleCellB) {
  // Path values are tiny so s <= delta except on the one cell where f jumps.
  std::vector<double> terminal(16, 0.0);
  terminal[3] = 8.0;
  terminal[2] = -8.0;
  const auto f = from_terminal(dyadic(4), terminal);
  const auto reps = verify_proof_chain(f, 0.25, 3.0);
  const auto s = conditional_square(f);
  CellSet B(16);
  for (std::size_t c = 0; c < 16; ++c) {
    if (s[c] > 0.25) B.insert(c);
  }
  EXPECT_EQ(reps[0].rhs, measure(B, f.filtration()));
  EXPECT_LE(reps[0].lhs, 4 * reps[0].rhs);
  EXPECT_TRUE(reps[0].pass);
}

TEST(Ratios, LepingleNonincreasingInR) {
  std::vector<Martingale> trials;
  for (std::uint64_t seed = 0; seed < 30; ++seed) trials.push_back(rademacher(8, seed));
  const std::vector<double> grid{2.1, 2.5, 3.0, 4.0};
  const auto curve = lepingle_growth(trials, 2.0, grid);
  EXPECT_TRUE(curve.nonincreasing);
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_LE(curve.max_ratio[i], curve.max_ratio[i - 1]);
  for (const auto& f : trials) {
    EXPECT_GE(lepingle_ratio(f, 2.0, 2.1).empirical_constant, lepingle_ratio(f, 2.0, 4.0).empirical_constant);
  }
}

TEST(Ratios, ConstantMartingaleGivesZero) {
  const auto f = from_terminal(dyadic(3), std::vector<double>(8, 2.0));
  EXPECT_EQ(lepingle_ratio(f, 2.0, 3.0).empirical_constant, 0.0);
  EXPECT_EQ(jump_ratio(f, 2.0, std::vector<double>{0.5}).empirical_constant, 0.0);
  const auto bdg = bdg_ratios(f, 2.0);
  EXPECT_EQ(bdg[1].name, "bdg.S_over_M");
  EXPECT_EQ(bdg[1].empirical_constant, 0.0);
}

TEST(Ratios, JumpsAboveTwiceSupVanish) {
  const auto f = rademacher(6, 4);
  EXPECT_EQ(jump_ratio(f, 2.0, std::vector<double>{100.0}).lhs, 0.0);
  EXPECT_THROW(jump_ratio(f, 2.0, std::vector<double>{}), ParameterError);
}

TEST(Ratios, DyadicConditionalOverSquareIsOne) {
  const auto f = random_martingale(dyadic(8), GeneratorSpec{}, 3);
  const auto reps = bdg_ratios(f, 2.0);
  ASSERT_EQ(reps[2].name, "bdg.s_over_S");
  EXPECT_NEAR(reps[2].empirical_constant, 1.0, 1e-12);
  EXPECT_EQ(bdg_ratios(f, 1.5)[2].name, "bdg.M_over_s");
}

TEST(Summary, Aggregates) {
  std::vector<VerificationReport> reps(3);
  reps[0].name = reps[1].name = "x";
  reps[2].name = "y";
  reps[0].empirical_constant = 1.0;
  reps[1].empirical_constant = 3.0;
  reps[2].empirical_constant = 9.0;
  const auto s = summarize("x", reps, 2);
  EXPECT_EQ(s.trials, 2u);
  EXPECT_EQ(s.excluded, 2u);
  EXPECT_EQ(s.max_ratio, 3.0);
  EXPECT_EQ(s.mean_ratio, 2.0);
}
