#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "lgrg/spinfit.hpp"

namespace lgrg {
namespace {

using testing::for_all;
using testing::Gen;

const SiteSet origin{{0, 0}};
const SiteSet hpair{{0, 0}, {1, 0}};

std::vector<SiteSet> reps(double cutoff) {
  std::vector<SiteSet> out;
  for (const auto& k : enumerate_classes(cutoff, Symmetry::translation)) out.push_back(k.representative);
  return out;
}

FreeEnergyTable random_targets(Gen& g, const std::vector<SiteSet>& xs) {
  FreeEnergyTable f;
  for (const auto& x : xs) f.set(x, g.real(0.5, 8.0));
  return f;
}

TEST(DesignEntry, Examples) {
  EXPECT_EQ(design_entry(origin, origin), -2);
  EXPECT_EQ(design_entry(origin, hpair), -4);
  EXPECT_EQ(design_entry(hpair, origin), -4);
  // Both sites of the pair inside X: only translates meeting one site count.
  EXPECT_EQ(design_entry(hpair, hpair), -4);
}

TEST(DesignEntry, TranslationCovariant) {
  for_all(100, 41, [](Gen& g) {
    const SiteSet x = g.site_set(g.integer(1, 5), 3);
    const SiteSet y = g.site_set(g.integer(1, 4), 2);
    const long e = design_entry(x, y);
    EXPECT_EQ(design_entry(x.translated(g.integer(-9, 9), g.integer(-9, 9)), y), e);
    EXPECT_EQ(design_entry(x, y.translated(g.integer(-9, 9), g.integer(-9, 9))), e);
    EXPECT_LE(e, 0);
    EXPECT_EQ(e % 2, 0);
  });
}

TEST(ContainingTranslates, Counts) {
  EXPECT_EQ(containing_translates(origin, hpair), 2);
  EXPECT_EQ(containing_translates(hpair, hpair), 1);
  EXPECT_EQ(containing_translates(hpair, {{0, 0}, {1, 0}, {2, 0}}), 2);
  EXPECT_EQ(containing_translates({{0, 0}, {0, 1}}, hpair), 0);
}

TEST(PartiallyExact, Examples) {
  Interaction c(Basis::gas, Scope::per_translation_class);
  c.set(origin, 0.8);
  const Interaction d1 = partially_exact(c, {origin});
  EXPECT_NEAR(d1.coefficient(origin), -0.4, 1e-15);

  c.set(hpair, -0.3);
  const Interaction d2 = partially_exact(c, {origin, hpair});
  EXPECT_NEAR(d2.coefficient(origin), -0.8 / 2 - 2 * (-0.3) / 4, 1e-15);
  EXPECT_NEAR(d2.coefficient(hpair), -0.3 / 4, 1e-15);
  EXPECT_EQ(d2.basis(), Basis::spin);
}

TEST(PartiallyExact, MissingFreeEnergyIsReported) {
  FreeEnergyTable f;
  f.set(hpair, 1.0);
  EXPECT_THROW(partially_exact(f, {origin, hpair}), MissingDependency);
}

TEST(PartiallyExact, ReproducesTargetsOnItsCollection) {
  for_all(10, 42, [](Gen& g) {
    const auto ys = reps(g.coin() ? 2.0 : 3.0);
    const FreeEnergyTable f = random_targets(g, ys);
    const Interaction d = partially_exact(f, ys);
    EXPECT_LE(fit_error(d, ys, f), 1e-10);
  });
}

TEST(UniformlyClose, SameCollectionsGiveZeroError) {
  for_all(5, 43, [](Gen& g) {
    const auto ys = reps(2.0);
    const FreeEnergyTable f = random_targets(g, ys);
    const FitResult r = uniformly_close({ys, ys, f});
    EXPECT_LE(r.epsilon, 1e-9);
    const Interaction pe = partially_exact(f, ys);
    for (const auto& y : ys) EXPECT_NEAR(r.d.coefficient(y), pe.coefficient(y), 1e-8) << to_string(y);
  });
}

TEST(UniformlyClose, DominatesPartiallyExactAndGrowsWithTargets) {
  for_all(5, 44, [](Gen& g) {
    const auto ys = reps(1.0);
    const auto xs_small = reps(2.0);
    const auto xs_large = reps(4.0);
    const FreeEnergyTable f = random_targets(g, xs_large);
    const FitResult small = uniformly_close({ys, xs_small, f});
    const FitResult large = uniformly_close({ys, xs_large, f});
    EXPECT_LE(small.epsilon, fit_error(partially_exact(f, ys), xs_small, f) + 1e-9);
    EXPECT_LE(large.epsilon, fit_error(partially_exact(f, ys), xs_large, f) + 1e-9);
    EXPECT_GE(large.epsilon, small.epsilon - 1e-9);
    EXPECT_NEAR(large.epsilon, fit_error(large.d, xs_large, f), 1e-9);
  });
}

TEST(UniformlyClose, RejectsFitSetOutsideTargets) {
  FreeEnergyTable f;
  f.set(origin, 1.0);
  EXPECT_THROW(uniformly_close({{origin, hpair}, {origin}, f}), std::invalid_argument);
  EXPECT_THROW(uniformly_close({{origin}, {origin, hpair}, f}), MissingDependency);
}

TEST(DesignMatrix, ThreadedMatchesSerial) {
  const auto xs = reps(4.0), ys = reps(2.0);
  EXPECT_EQ(design_matrix(xs, ys, 1), design_matrix(xs, ys, 3));
}

}  // namespace
}  // namespace lgrg
