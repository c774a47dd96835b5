#include <gtest/gtest.h>

#include <cmath>

#include "mgvar/errors.hpp"
#include "mgvar/operators.hpp"
#include "mgvar/stopping.hpp"

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

// E[1_B | F_n] evaluated independently by summing cell masses.
double atom_average(const Filtration& f, const CellSet& B, int n, std::size_t atom) {
  double hit = 0.0;
  for (auto c : f.atom_cells(n, atom)) hit += B.contains(c) ? f.cell_measure()[c] : 0.0;
  return hit / f.atom_measure(n, atom);
}

}  // namespace

TEST(Sigma, ConstantMartingaleNeverStops) {
  const auto f = from_terminal(dyadic(4), std::vector<double>(16, 3.0));
  const auto sigma = first_variation_exceed(f, 2.5, 0.1);
  EXPECT_EQ(sigma.never, 5);
  for (std::size_t c = 0; c < 16; ++c) EXPECT_FALSE(sigma.stopped(c));
  EXPECT_TRUE(is_measurable(sigma, f.filtration()));
}

TEST(Sigma, JumpToTwoStopsAtOne) {
  // Path (0, 2, 2) on cell 0; other cells absorb the mean.
  const Martingale f(dyadic(2), {{0.0}, {2.0, -2.0}, {2.0, 2.0, -2.0, -2.0}});
  const auto sigma = first_variation_exceed(f, 2.0, 1.0);
  EXPECT_EQ(sigma.level[0], 1);
  const auto never = first_variation_exceed(f, 2.0, 5.0);
  EXPECT_FALSE(never.stopped(0));
  // A tie at the threshold does not stop.
  EXPECT_FALSE(first_variation_exceed(f, 2.0, 2.0).stopped(0));
  EXPECT_THROW(first_variation_exceed(f, 1.0, 1.0), ParameterError);
  EXPECT_THROW(first_variation_exceed(f, 2.0, 0.0), ParameterError);
}

TEST(Sigma, AlwaysMeasurable) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto filt = std::make_shared<const Filtration>(random_filtration(6, 70, seed));
    const auto f = random_martingale(filt, GeneratorSpec{}, seed);
    EXPECT_TRUE(is_measurable(first_variation_exceed(f, 3.0, 0.5), *filt));
  }
}

TEST(StoppedTail, Extremes) {
  const auto f = rademacher(4, 3);
  StoppingTime never;
  never.never = 5;
  never.level.assign(16, 5);
  EXPECT_TRUE(stopped_tail(f, never).identically_zero());

  StoppingTime zero = never;
  zero.level.assign(16, 0);
  const auto g = stopped_tail(f, zero);
  for (int n = 0; n <= 4; ++n) {
    for (std::size_t a = 0; a < f.filtration().atoms(n); ++a) {
      EXPECT_EQ(g.level(n)[a], f.level(n)[a] - f.level(0)[0]);
    }
  }
}

TEST(StoppedTail, RejectsNonMeasurable) {
  const auto f = rademacher(2, 1);
  StoppingTime bad;
  bad.never = 3;
  bad.level = {1, 2, 3, 3};  // {sigma = 1} splits a level-1 atom
  EXPECT_FALSE(is_measurable(bad, f.filtration()));
  EXPECT_THROW(stopped_tail(f, bad), ContractError);
}

TEST(StoppedTail, IsMartingaleVanishingBeforeSigma) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto filt = std::make_shared<const Filtration>(random_filtration(7, 90, seed));
    const auto f = random_martingale(filt, GeneratorSpec{}, seed);
    const auto sigma = first_variation_exceed(f, 2.5, 0.7);
    const auto g = stopped_tail(f, sigma);
    EXPECT_LE(g.residual(), 1e-10);
    for (int n = 0; n <= filt->depth(); ++n) {
      for (std::size_t c = 0; c < filt->cells(); ++c) {
        if (sigma.level[c] >= n) {
          EXPECT_EQ(g.value(n, c), 0.0);
        }
      }
    }
  }
}

TEST(ProofSets, SmallSquareFunctionGivesEmptyB) {
  const auto f = rademacher(5, 2, 0.01);
  const auto sets = proof_sets(f, 0.25);
  EXPECT_TRUE(sets.B.none());
  EXPECT_TRUE(sets.B_star.none());
  EXPECT_EQ(sets.G.count(), 32u);
  for (const auto& U : sets.U) EXPECT_EQ(U.count(), 32u);
  EXPECT_THROW(proof_sets(f, 0.5), ParameterError);
  EXPECT_THROW(proof_sets(f, 0.0), ParameterError);
}

TEST(ProofSets, SingleCellB) {
  const auto f = rademacher(4, 0);
  std::vector<double> s(16, 0.0);
  s[5] = 1.0;
  const auto sets = proof_sets(f, s, 0.25);
  EXPECT_EQ(sets.B.members(), (std::vector<std::size_t>{5}));
  EXPECT_EQ(sets.B_star, sets.B);
  EXPECT_EQ(sets.G, sets.B.complement());
  EXPECT_EQ(sets.U[4], sets.B.complement());
  EXPECT_EQ(sets.U[3].count(), 16u);  // E[1_B | F_3] = 1/2 on {4, 5}
}

TEST(ProofSets, AllCellsInB) {
  const auto f = rademacher(3, 0);
  const auto sets = proof_sets(f, std::vector<double>(8, 1.0), 0.25);
  EXPECT_TRUE(sets.G.none());
}

TEST(ProofSets, MatchIndependentAverages) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto filt = std::make_shared<const Filtration>(random_filtration(6, 60, seed));
    const auto f = random_martingale(filt, GeneratorSpec{}, seed);
    const auto sets = proof_sets(f, 0.3);
    const auto s = conditional_square(f);
    for (std::size_t c = 0; c < filt->cells(); ++c) {
      EXPECT_EQ(sets.B.contains(c), s[c] > 0.3);
      double sup = 0.0;
      for (int n = 0; n <= filt->depth(); ++n) {
        const double h = atom_average(*filt, sets.B, n, filt->atom_of(n, c));
        sup = std::max(sup, h);
        EXPECT_EQ(sets.U[n].contains(c), h <= 0.5);
      }
      EXPECT_EQ(sets.B_star.contains(c), sup > 0.5);
    }
    EXPECT_TRUE(sets.B.subset_of(sets.B_star));
    for (const auto& U : sets.U) EXPECT_TRUE(sets.G.subset_of(U));
  }
}

TEST(Transform, ExtremeSets) {
  const auto f = rademacher(4, 7);
  auto sets = proof_sets(f, std::vector<double>(16, 0.0), 0.25);
  const auto all = truncated_transform(f, sets);
  for (int n = 0; n <= 4; ++n) {
    for (std::size_t a = 0; a < f.filtration().atoms(n); ++a) EXPECT_EQ(all.level(n)[a], f.level(n)[a] - f.level(0)[0]);
  }
  for (auto& level : sets.U_atoms) std::fill(level.begin(), level.end(), 0);
  EXPECT_TRUE(truncated_transform(f, sets).identically_zero());
  sets.U_atoms.pop_back();
  EXPECT_THROW(truncated_transform(f, sets), ContractError);
}

// Independent oracle: accumulate the transformed increments along each path.
TEST(Transform, MatchesIncrementOracle) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto f = rademacher(8, seed, 0.2);
    const auto sigma = first_variation_exceed(f, 3.0, 1.0);
    const auto g = stopped_tail(f, sigma);
    const auto sets = proof_sets(f, 0.25);
    const auto gt = truncated_transform(g, sets);
    EXPECT_LE(gt.residual(), 1e-10);
    const auto& filt = f.filtration();
    for (std::size_t c = 0; c < filt.cells(); ++c) {
      double acc = 0.0;
      for (int n = 1; n <= 8; ++n) {
        if (sets.U[n - 1].contains(c)) acc += g.value(n, c) - g.value(n - 1, c);
        EXPECT_NEAR(gt.value(n, c), acc, 1e-12);
        if (sets.G.contains(c)) {
          EXPECT_EQ(gt.value(n, c), g.value(n, c) - g.value(0, c));
        }
      }
    }
    // Conditional increments vanish: E[d~_n | F_{n-1}] = 0.
    for (int n = 1; n <= 8; ++n) {
      for (std::size_t a = 0; a < filt.atoms(n - 1); ++a) {
        double sum = 0.0;
        for (auto ch : filt.children(n - 1, a))
          sum += filt.atom_measure(n, ch) * (gt.level(n)[ch] - gt.level(n - 1)[a]);
        EXPECT_NEAR(sum, 0.0, 1e-12);
      }
    }
  }
}
