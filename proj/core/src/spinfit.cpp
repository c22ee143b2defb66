#include "lgrg/spinfit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <thread>

namespace lgrg {

namespace {

std::set<Site> offsets(const SiteSet& x, const SiteSet& y) {
  std::set<Site> out;
  for (const Site& a : x)
    for (const Site& b : y) out.insert({a.x - b.x, a.y - b.y});
  return out;
}

std::vector<SiteSet> canonical_list(const std::vector<SiteSet>& sets) {
  std::vector<SiteSet> out;
  for (const SiteSet& s : sets) {
    if (s.empty()) throw std::invalid_argument("fit collections cannot contain the empty set");
    out.push_back(canonical_translate(s));
  }
  return out;
}

}  // namespace

long design_entry(const SiteSet& x, const SiteSet& y) {
  if (x.empty() || y.empty()) throw std::invalid_argument("design_entry needs nonempty sets");
  long odd = 0;
  for (const Site& t : offsets(x, y)) {
    std::size_t hits = 0;
    for (const Site& s : y)
      if (x.contains({s.x + t.x, s.y + t.y})) ++hits;
    if (hits % 2 == 1) ++odd;
  }
  return -2 * odd;
}

long containing_translates(const SiteSet& y, const SiteSet& x) {
  if (y.empty()) throw std::invalid_argument("containing_translates of the empty set");
  long count = 0;
  // Y + t subset of X forces t = x0 - y0 for the first site y0 of Y.
  for (const Site& a : x) {
    const Site t{a.x - y[0].x, a.y - y[0].y};
    bool inside = true;
    for (const Site& s : y) {
      if (!x.contains({s.x + t.x, s.y + t.y})) {
        inside = false;
        break;
      }
    }
    if (inside) ++count;
  }
  return count;
}

Matrix design_matrix(const std::vector<SiteSet>& x_classes, const std::vector<SiteSet>& y_classes, unsigned jobs) {
  Matrix a(x_classes.size(), std::vector<double>(y_classes.size(), 0.0));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < x_classes.size(); i = next++)
      for (std::size_t j = 0; j < y_classes.size(); ++j)
        a[i][j] = static_cast<double>(design_entry(x_classes[i], y_classes[j]));
  };
  const unsigned workers = std::max(1u, jobs);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return a;
}

Interaction partially_exact(const Interaction& c, const std::vector<SiteSet>& y_classes) {
  if (c.basis() != Basis::gas) throw std::invalid_argument("partially_exact expects gas coefficients");
  const std::vector<SiteSet> ys = canonical_list(y_classes);
  Interaction d(Basis::spin, Scope::per_translation_class);
  for (const SiteSet& y : ys) {
    double sum = 0.0;
    for (const SiteSet& x : ys) {
      if (x.size() < y.size()) continue;
      const double cx = c.coefficient(x);
      if (cx == 0.0) continue;
      const long k = containing_translates(y, x);
      if (k != 0) sum += std::ldexp(cx, -static_cast<int>(x.size())) * static_cast<double>(k);
    }
    d.set(y, y.size() % 2 == 0 ? sum : -sum);
  }
  return d;
}

Interaction partially_exact(const FreeEnergyTable& f, const std::vector<SiteSet>& y_classes) {
  Interaction c(Basis::gas, Scope::per_translation_class);
  for (const SiteSet& y : y_classes) c.set(y, mobius_invert(f, y));
  return partially_exact(c, y_classes);
}

FitResult uniformly_close(const FitProblem& problem, const SimplexOptions& options, unsigned jobs) {
  const std::vector<SiteSet> ys = canonical_list(problem.y_classes);
  const std::vector<SiteSet> xs = canonical_list(problem.x_classes);
  const std::set<SiteSet> x_set(xs.begin(), xs.end());
  for (const SiteSet& y : ys) {
    if (!x_set.count(y)) throw std::invalid_argument("Y class " + to_string(y) + " is not among the X classes");
  }
  std::vector<double> targets;
  targets.reserve(xs.size());
  for (const SiteSet& x : xs) {
    const auto v = problem.targets.lookup(x);
    if (!v) throw MissingDependency(x);
    targets.push_back(*v);
  }
  const Matrix a = design_matrix(xs, ys, jobs);
  const MinimaxSolution sol = simplex_minimax(a, targets, options);

  FitResult out;
  for (std::size_t j = 0; j < ys.size(); ++j) out.d.set(ys[j], sol.d[j]);
  out.epsilon = sol.epsilon;
  out.iterations = sol.iterations;
  out.distinct_rows = sol.distinct_rows;
  return out;
}

double fit_error(const Interaction& d, const std::vector<SiteSet>& x_classes, const FreeEnergyTable& targets) {
  if (d.basis() != Basis::spin) throw std::invalid_argument("fit_error expects spin coefficients");
  double worst = 0.0;
  for (const SiteSet& x : x_classes) {
    const auto f = targets.lookup(x);
    if (!f) throw MissingDependency(canonical_translate(x));
    double model = 0.0;
    for (const auto& [y, dy] : d.terms()) {
      if (y.empty()) continue;
      model += dy * static_cast<double>(design_entry(x, y));
    }
    worst = std::max(worst, std::abs(*f - model));
  }
  return worst;
}

}  // namespace lgrg
