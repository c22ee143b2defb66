#pragma once

// Spin-basis coefficients d(Y), one per translation class, from lattice-gas
// data: the partially exact truncation and the uniformly close minimax fit.
//
// With H(sigma) = sum_Y d(Y) sum_t sigma(Y + t), the free energy of the block
// configuration that is -1 exactly on X is
//   f(X) = sum_Y d(Y) A[X, Y],   A[X, Y] = -2 #{t : |(Y + t) cap X| odd},
// which is finite for every finite X. The constant d(empty) cancels.

#include <vector>

#include "lgrg/interaction.hpp"
#include "lgrg/simplex.hpp"

namespace lgrg {

/// -2 times the number of translates of Y meeting X in an odd number of sites.
long design_entry(const SiteSet& x, const SiteSet& y);

/// Number of translations t with Y + t contained in X.
long containing_translates(const SiteSet& y, const SiteSet& x);

/// Rows indexed by `x_classes`, columns by `y_classes`.
Matrix design_matrix(const std::vector<SiteSet>& x_classes, const std::vector<SiteSet>& y_classes, unsigned jobs = 1);

/// d(Y) = (-1)^{|Y|} sum over translates X of members of `y_classes` with
/// Y subset of X of c(X) 2^{-|X|}, for each Y in `y_classes`. Absent c
/// entries count as zero.
Interaction partially_exact(const Interaction& c, const std::vector<SiteSet>& y_classes);
/// Same, with c obtained by Moebius inversion of `f`. Throws
/// MissingDependency when a needed free energy is absent.
Interaction partially_exact(const FreeEnergyTable& f, const std::vector<SiteSet>& y_classes);

struct FitProblem {
  std::vector<SiteSet> y_classes;
  std::vector<SiteSet> x_classes;
  FreeEnergyTable targets;
};

struct FitResult {
  Interaction d{Basis::spin, Scope::per_translation_class};
  double epsilon = 0.0;
  std::size_t iterations = 0;
  std::size_t distinct_rows = 0;
};

/// Minimizes max over X of |f(X) - sum_Y d(Y) A[X, Y]|. Throws
/// std::invalid_argument unless every Y class is also an X class, and
/// MissingDependency when a target is absent.
FitResult uniformly_close(const FitProblem& problem, const SimplexOptions& options = {}, unsigned jobs = 1);

/// max over `x_classes` of |f(X) - sum_Y d(Y) A[X, Y]| for a given d table.
double fit_error(const Interaction& d, const std::vector<SiteSet>& x_classes, const FreeEnergyTable& targets);

}  // namespace lgrg
