#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "lgrg/simplex.hpp"
#include "oracles.hpp"

namespace lgrg {
namespace {

using testing::for_all;
using testing::Gen;

TEST(SolveLp, TextbookOptimum) {
  // max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), value 36.
  const Matrix a{{1, 0}, {0, 2}, {3, 2}};
  const LpSolution s = solve_lp(a, {4, 12, 18}, {-3, -5});
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_NEAR(s.x[0], 2, 1e-9);
  EXPECT_NEAR(s.x[1], 6, 1e-9);
  EXPECT_NEAR(s.objective, -36, 1e-9);
}

TEST(SolveLp, NegativeRightHandSideNeedsPhaseOne) {
  // min x + y st x + y >= 2, x - y <= 1.
  const Matrix a{{-1, -1}, {1, -1}};
  const LpSolution s = solve_lp(a, {-2, 1}, {1, 1});
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_NEAR(s.objective, 2, 1e-9);
}

TEST(SolveLp, InfeasibleAndUnbounded) {
  EXPECT_EQ(solve_lp({{1}, {-1}}, {1, -2}, {1}).status, LpStatus::infeasible);
  EXPECT_EQ(solve_lp({{1, -1}}, {1}, {-1, 0}).status, LpStatus::unbounded);
}

TEST(SolveLp, CyclingExampleTerminates) {
  // Beale's example cycles under textbook Dantzig pricing.
  const Matrix a{{0.25, -8, -1, 9}, {0.5, -12, -0.5, 3}, {0, 0, 1, 0}};
  SimplexOptions opt;
  opt.degenerate_switch = 2;
  const LpSolution s = solve_lp(a, {0, 0, 1}, {-0.75, 20, -0.5, 6}, opt);
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_NEAR(s.objective, -1.25, 1e-9);
}

TEST(SolveLp, IterationCap) {
  SimplexOptions opt;
  opt.max_iterations = 1;
  const Matrix a{{1, 0}, {0, 2}, {3, 2}};
  EXPECT_THROW(solve_lp(a, {4, 12, 18}, {-3, -5}, opt), SimplexIterationLimit);
}

TEST(SimplexMinimax, OneDimensionalExample) {
  const MinimaxSolution s = simplex_minimax({{-2}, {-2}}, {1.0, 2.0});
  ASSERT_EQ(s.d.size(), 1u);
  EXPECT_NEAR(s.d[0], -0.75, 1e-9);
  EXPECT_NEAR(s.epsilon, 0.5, 1e-9);
  EXPECT_EQ(s.distinct_rows, 1u);
  // Grid check of the same fit.
  double best = 1e9;
  for (int k = -4000; k <= 4000; ++k) {
    const double d = k * 1e-3;
    best = std::min(best, std::max(std::abs(1 + 2 * d), std::abs(2 + 2 * d)));
  }
  EXPECT_NEAR(s.epsilon, best, 1e-9);
}

TEST(SimplexMinimax, SquareSystemInterpolates) {
  for_all(30, 31, [](Gen& g) {
    const int n = g.integer(1, 6);
    Matrix a(n, std::vector<double>(n));
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a[i][j] = g.real(-1, 1) + (i == j ? 3 : 0);
      f[i] = g.real(-5, 5);
    }
    const MinimaxSolution s = simplex_minimax(a, f);
    EXPECT_LE(s.epsilon, 1e-9);
    std::vector<double> x;
    ASSERT_TRUE(testing::solve_square(a, f, x));
    for (int j = 0; j < n; ++j) EXPECT_NEAR(s.d[j], x[j], 1e-9);
  });
}

TEST(SimplexMinimax, MatchesVertexEnumeration) {
  for_all(60, 32, [](Gen& g) {
    const int k = g.integer(1, 4);
    const int m = g.integer(k + 1, 10);
    Matrix a(m, std::vector<double>(k));
    std::vector<double> f(m);
    for (int i = 0; i < m; ++i) {
      for (auto& v : a[i]) v = g.real(-2, 2);
      f[i] = g.real(-3, 3);
    }
    const MinimaxSolution s = simplex_minimax(a, f);
    EXPECT_NEAR(s.epsilon, testing::vertex_minimax(a, f), 1e-6);
    EXPECT_NEAR(s.epsilon, max_residual(a, f, s.d), 1e-12);
  });
}

TEST(SimplexMinimax, ZeroIsNeverBetter) {
  for_all(40, 33, [](Gen& g) {
    const int k = g.integer(1, 4), m = g.integer(1, 12);
    Matrix a(m, std::vector<double>(k));
    std::vector<double> f(m);
    double fmax = 0;
    for (int i = 0; i < m; ++i) {
      for (auto& v : a[i]) v = static_cast<double>(-2 * g.integer(0, 3));
      f[i] = g.real(-3, 3);
      fmax = std::max(fmax, std::abs(f[i]));
    }
    EXPECT_LE(simplex_minimax(a, f).epsilon, fmax + 1e-12);
  });
}

TEST(SimplexMinimax, DuplicateRowsMerge) {
  const Matrix a{{-2, 0}, {0, -4}, {-2, 0}, {0, -4}, {-2, 0}};
  const MinimaxSolution s = simplex_minimax(a, {1, 1, 2, 1, 0});
  EXPECT_EQ(s.distinct_rows, 2u);
  EXPECT_NEAR(s.epsilon, 1.0, 1e-9);
}

}  // namespace
}  // namespace lgrg
