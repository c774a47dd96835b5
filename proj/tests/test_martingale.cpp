#include <gtest/gtest.h>

#include <cmath>

#include "mgvar/errors.hpp"
#include "mgvar/martingale.hpp"
#include "mgvar/operators.hpp"

using namespace mgvar;

namespace {

std::shared_ptr<const Filtration> dyadic(int depth) {
  return std::make_shared<const Filtration>(Filtration::dyadic(depth));
}

double integral(std::span<const double> field, const Filtration& f, bool square) {
  double total = 0.0;
  for (std::size_t c = 0; c < field.size(); ++c) total += f.cell_measure()[c] * (square ? field[c] * field[c] : field[c]);
  return total;
}

}  // namespace

TEST(FromTerminal, HandExamples) {
  const auto f = from_terminal(dyadic(2), std::vector<double>{1, 0, 0, 0});
  EXPECT_EQ(f.level(0)[0], 0.25);
  EXPECT_EQ(std::vector<double>(f.level(1).begin(), f.level(1).end()), (std::vector<double>{0.5, 0.0}));
  EXPECT_EQ(std::vector<double>(f.level(2).begin(), f.level(2).end()), (std::vector<double>{1, 0, 0, 0}));

  const auto g = from_terminal(dyadic(2), std::vector<double>{1, -1, 1, -1});
  EXPECT_EQ(g.level(0)[0], 0.0);
  EXPECT_EQ(g.level(1)[0], 0.0);
  EXPECT_EQ(g.level(1)[1], 0.0);

  const auto c = from_terminal(dyadic(3), std::vector<double>(8, -2.0));
  for (int n = 0; n <= 3; ++n) {
    for (double x : c.level(n)) EXPECT_EQ(x, -2.0);
  }
}

TEST(Martingale, ShapeMismatchThrows) {
  EXPECT_THROW(Martingale(dyadic(1), {{0.0}}), ParameterError);
  EXPECT_THROW(Martingale(dyadic(1), {{0.0}, {1.0}}), ParameterError);
  EXPECT_THROW(from_terminal(dyadic(1), std::vector<double>{1.0}), ParameterError);
}

TEST(Martingale, ResidualDetectsBrokenProperty) {
  const Martingale good(dyadic(1), {{0.0}, {1.0, -1.0}});
  EXPECT_EQ(good.residual(), 0.0);
  const Martingale bad(dyadic(1), {{0.0}, {1.0, 0.0}});
  EXPECT_GT(bad.residual(), 0.1);
  const Martingale zero(dyadic(2), {{0.0}, {0.0, 0.0}, {0, 0, 0, 0}});
  EXPECT_TRUE(zero.identically_zero());
  EXPECT_EQ(zero.residual(), 0.0);
}

TEST(Martingale, PathsFollowAtoms) {
  const auto f = from_terminal(dyadic(2), std::vector<double>{1, 0, 0, 0});
  const auto table = f.paths();
  ASSERT_EQ(table.rows(), 4u);
  ASSERT_EQ(table.length(), 3u);
  const auto row0 = table.row(0);
  EXPECT_EQ(std::vector<double>(row0.begin(), row0.end()), (std::vector<double>{0.25, 0.5, 1.0}));
  const auto row3 = table.row(3);
  EXPECT_EQ(std::vector<double>(row3.begin(), row3.end()), (std::vector<double>{0.25, 0.0, 0.0}));
}

TEST(Generators, DeterministicAndValid) {
  using K = GeneratorKind;
  struct Case {
    std::shared_ptr<const Filtration> filt;
    std::vector<K> kinds;
  };
  const std::vector<Case> cases{
      {dyadic(12), {K::terminal_gaussian, K::uniform_terminal, K::dyadic_rademacher, K::reflecting}},
      {std::make_shared<const Filtration>(random_filtration(8, 200, 4)), {K::terminal_gaussian, K::uniform_terminal}},
      {std::make_shared<const Filtration>(comb_filtration(40, 0.02, 0.1, 4)),
       {K::terminal_gaussian, K::uniform_terminal, K::reflecting}}};
  for (const auto& c : cases) {
    for (auto kind : c.kinds) {
      GeneratorSpec spec;
      spec.kind = kind;
      spec.scale_min = 0.1;
      spec.scale_max = 3.0;
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto a = random_martingale(c.filt, spec, seed);
        const auto b = random_martingale(c.filt, spec, seed);
        EXPECT_EQ(a.values(), b.values());
        EXPECT_LE(a.residual(), 1e-10) << to_string(kind);
      }
    }
  }
  GeneratorSpec rad;
  rad.kind = K::dyadic_rademacher;
  EXPECT_THROW(random_martingale(cases[2].filt, rad, 1), ParameterError);
  rad.scale_min = 2.0;
  rad.scale_max = 1.0;
  EXPECT_THROW(random_martingale(cases[0].filt, rad, 1), ParameterError);
}

TEST(Generators, RademacherUnitScheduleHasSquareRootN) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::dyadic_rademacher;
  spec.schedule = std::vector<double>(6, 1.0);
  const auto f = random_martingale(dyadic(6), spec, 9);
  for (double s : square(f)) EXPECT_NEAR(s, std::sqrt(6.0), 1e-14);
  EXPECT_EQ(f.level(0)[0], 0.0);
}

TEST(Generators, ReflectingCrossesZero) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::reflecting;
  const auto f = random_martingale(dyadic(6), spec, 2);
  EXPECT_LE(f.residual(), 1e-10);
  EXPECT_FALSE(f.identically_zero());
}

TEST(Generators, NamesRoundTrip) {
  for (auto kind : {GeneratorKind::terminal_gaussian, GeneratorKind::uniform_terminal, GeneratorKind::dyadic_rademacher,
                    GeneratorKind::reflecting}) {
    EXPECT_EQ(generator_from_string(to_string(kind)), kind);
  }
  EXPECT_THROW(generator_from_string("brownian"), ParameterError);
}

// int f_N^2 = int f_0^2 + int s(f)^2 on arbitrary filtrations.
TEST(Generators, L2IdentityHolds) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto filt = std::make_shared<const Filtration>(random_filtration(6, 90, seed));
    GeneratorSpec spec;
    spec.kind = seed % 2 ? GeneratorKind::uniform_terminal : GeneratorKind::terminal_gaussian;
    const auto f = random_martingale(filt, spec, seed);
    const double left = integral(f.level_field(f.depth()), *filt, true);
    const double right = integral(f.level_field(0), *filt, true) + integral(conditional_square(f), *filt, true);
    EXPECT_NEAR(left, right, 1e-9 * left);
  }
}

TEST(Scaled, MultipliesEveryLevel) {
  const auto f = from_terminal(dyadic(2), std::vector<double>{1, 0, 0, 0});
  const auto g = scaled(f, -2.0);
  EXPECT_EQ(g.level(0)[0], -0.5);
  EXPECT_EQ(terminal_field(g), (std::vector<double>{-2, 0, 0, 0}));
}
