#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "mgvar/errors.hpp"
#include "mgvar/filtration.hpp"
#include "mgvar/martingale.hpp"

using namespace mgvar;

TEST(Dyadic, DepthZeroIsOneCell) {
  const auto f = Filtration::dyadic(0);
  EXPECT_EQ(f.depth(), 0);
  EXPECT_EQ(f.cells(), 1u);
  EXPECT_EQ(f.atoms(0), 1u);
  EXPECT_DOUBLE_EQ(f.atom_measure(0, 0), 1.0);
}

TEST(Dyadic, DepthTwoLevels) {
  const auto f = Filtration::dyadic(2);
  EXPECT_EQ(f.atoms(0), 1u);
  EXPECT_EQ(f.atoms(1), 2u);
  EXPECT_EQ(f.atoms(2), 4u);
  const auto a0 = f.atom_cells(1, 0);
  const auto a1 = f.atom_cells(1, 1);
  EXPECT_EQ(std::vector<CellIndex>(a0.begin(), a0.end()), (std::vector<CellIndex>{0, 1}));
  EXPECT_EQ(std::vector<CellIndex>(a1.begin(), a1.end()), (std::vector<CellIndex>{2, 3}));
  for (int n = 0; n <= 2; ++n) {
    for (std::size_t a = 0; a < f.atoms(n); ++a) EXPECT_DOUBLE_EQ(f.atom_measure(n, a), std::ldexp(1.0, -n));
  }
}

TEST(Dyadic, DepthThreeAtomContents) {
  const auto f = Filtration::dyadic(3);
  const auto cells = f.atom_cells(2, 1);
  EXPECT_EQ(std::vector<CellIndex>(cells.begin(), cells.end()), (std::vector<CellIndex>{2, 3}));
  EXPECT_DOUBLE_EQ(f.atom_measure(2, 1), 0.25);
}

TEST(Dyadic, RejectsBadDepth) {
  EXPECT_THROW(Filtration::dyadic(-1), ParameterError);
  EXPECT_THROW(Filtration::dyadic(40), ParameterError);
}

TEST(Validate, DyadicIsClean) { EXPECT_TRUE(validate(Filtration::dyadic(3)).empty()); }

TEST(Validate, StraddlingAtomIsRefinementViolation) {
  const LevelTable levels{{{0, 1, 2, 3}}, {{0, 1}, {2, 3}}, {{0}, {1, 2}, {3}}};
  const auto f = Filtration::unchecked({0.25, 0.25, 0.25, 0.25}, levels);
  const auto v = validate(f);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, "refinement");
  EXPECT_EQ(v[0].level, 2);
  EXPECT_THROW(Filtration::from_levels({0.25, 0.25, 0.25, 0.25}, levels), ParameterError);
}

TEST(Validate, ZeroMassCellIsPositivityViolation) {
  const LevelTable levels{{{0, 1}}, {{0}, {1}}};
  const auto v = validate(Filtration::unchecked({1.0, 0.0}, levels));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, "positivity");
  EXPECT_EQ(v[0].cell, 1);
}

TEST(Validate, MissingCellIsPartitionViolation) {
  const LevelTable levels{{{0, 1}}, {{0}}};
  const auto v = validate(Filtration::unchecked({0.5, 0.5}, levels));
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].kind, "partition");
}

TEST(ConditionalExpectation, IndicatorOnDyadic) {
  const auto f = Filtration::dyadic(2);
  const std::vector<double> field{1, 0, 0, 0};
  const auto e = conditional_expectation(field, 1, f);
  EXPECT_EQ(e, (std::vector<double>{0.5, 0.5, 0, 0}));
  EXPECT_EQ(conditional_expectation(field, 2, f), field);
  EXPECT_THROW(conditional_expectation(field, 3, f), ParameterError);
}

TEST(ConditionalExpectation, ConstantStaysConstant) {
  const auto f = random_filtration(5, 40, 3);
  const std::vector<double> c(f.cells(), 2.5);
  for (int n = 0; n <= 5; ++n) {
    for (double x : conditional_expectation(c, n, f)) EXPECT_NEAR(x, 2.5, 1e-12);
  }
}

// Projection and tower properties on random filtrations.
TEST(ConditionalExpectation, ProjectionAndTower) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = random_filtration(6, 50, seed);
    std::vector<double> field(f.cells());
    for (auto& x : field) x = normal(rng);
    for (int n = 0; n <= 6; ++n) {
      const auto once = conditional_expectation(field, n, f);
      const auto twice = conditional_expectation(once, n, f);
      for (std::size_t c = 0; c < field.size(); ++c) EXPECT_NEAR(once[c], twice[c], 1e-12 * (1 + std::fabs(once[c])));
      for (int m = 0; m <= n; ++m) {
        const auto tower = conditional_expectation(once, m, f);
        const auto direct = conditional_expectation(field, m, f);
        for (std::size_t c = 0; c < field.size(); ++c)
          EXPECT_NEAR(tower[c], direct[c], 1e-12 * (1 + std::fabs(direct[c])));
      }
    }
  }
}

TEST(Regularity, Examples) {
  EXPECT_DOUBLE_EQ(regularity_constant(Filtration::dyadic(0)), 1.0);
  EXPECT_DOUBLE_EQ(regularity_constant(Filtration::dyadic(4)), 2.0);
  const auto uneven = Filtration::from_levels({0.9, 0.1}, {{{0, 1}}, {{0}, {1}}});
  EXPECT_NEAR(regularity_constant(uneven), 10.0, 1e-12);
  const auto trivial = Filtration::from_levels({0.5, 0.5}, {{{0, 1}}, {{0, 1}}});
  EXPECT_DOUBLE_EQ(regularity_constant(trivial), 1.0);
}

// Nonnegative martingales grow by at most R* per step, and the indicator of
// the smallest child attains R*.
TEST(Regularity, BoundHoldsAndIsAttained) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto filt = std::make_shared<const Filtration>(random_filtration(1 + seed % 8, 60, seed));
    const double R = regularity_constant(*filt);
    std::vector<double> terminal(filt->cells());
    for (auto& x : terminal) x = unif(rng);
    const auto g = from_terminal(filt, terminal);
    for (int n = 1; n <= filt->depth(); ++n) {
      for (std::size_t a = 0; a < filt->atoms(n); ++a) {
        EXPECT_LE(g.level(n)[a], R * g.level(n - 1)[filt->parent(n, a)] + 1e-12);
      }
    }
    double best = 0.0;
    for (int n = 1; n <= filt->depth(); ++n) {
      for (std::size_t a = 0; a < filt->atoms(n); ++a) {
        std::vector<double> ind(filt->cells(), 0.0);
        for (auto c : filt->atom_cells(n, a)) ind[c] = 1.0;
        const auto h = from_terminal(filt, ind);
        best = std::max(best, h.level(n)[a] / h.level(n - 1)[filt->parent(n, a)]);
      }
    }
    EXPECT_GE(best, R - 1e-9);
  }
}

TEST(Generators, RandomAndCombAreValid) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = random_filtration(7, 80, seed);
    EXPECT_TRUE(validate(r).empty());
    EXPECT_NEAR(r.total_measure(), 1.0, 1e-12);
    const auto c = comb_filtration(30, 0.02, 0.1, seed);
    EXPECT_TRUE(validate(c).empty());
    EXPECT_EQ(c.cells(), 31u);
    EXPECT_EQ(c.atom_cells(30, c.atom_of(30, 0)).size(), 1u);
  }
  EXPECT_THROW(comb_filtration(5, 0.5, 0.2, 1), ParameterError);
}

TEST(Sets, MeasureAndAtomUnion) {
  const auto f = Filtration::dyadic(3);
  CellSet s(8);
  s.insert(2);
  s.insert(3);
  EXPECT_DOUBLE_EQ(measure(s, f), 0.25);
  EXPECT_TRUE(is_union_of_atoms(s, 2, f));
  EXPECT_FALSE(is_union_of_atoms(s, 1, f));
  s.insert(4);
  EXPECT_FALSE(is_union_of_atoms(s, 2, f));
  EXPECT_TRUE(is_union_of_atoms(s, 3, f));
}
