#pragma once

// Seeded random inputs for property tests. Every property runs a fixed number
// of cases; the case seed is attached to failures so a case can be replayed.

#include <gtest/gtest.h>

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lgrg/interaction.hpp"
#include "lgrg/lattice.hpp"

namespace lgrg::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  bool coin() { return integer(0, 1) == 1; }
  std::uint64_t bits(std::uint64_t n) { return n == 64 ? eng_() : eng_() & ((std::uint64_t{1} << n) - 1); }

  Site site(int extent) { return {integer(-extent, extent), integer(-extent, extent)}; }

  /// `n` distinct sites in the square [-extent, extent]^2.
  SiteSet site_set(std::size_t n, int extent) {
    std::set<Site> s;
    while (s.size() < n) s.insert(site(extent));
    return SiteSet(std::vector<Site>(s.begin(), s.end()));
  }

  /// Nonempty set grown by random nearest-neighbor steps, `n` sites.
  SiteSet connected_set(std::size_t n) {
    std::set<Site> s{{0, 0}};
    while (s.size() < n) {
      auto it = s.begin();
      std::advance(it, integer(0, static_cast<int>(s.size()) - 1));
      static constexpr int dx[] = {1, -1, 0, 0};
      static constexpr int dy[] = {0, 0, 1, -1};
      const int k = integer(0, 3);
      s.insert({it->x + dx[k], it->y + dy[k]});
    }
    return SiteSet(std::vector<Site>(s.begin(), s.end()));
  }

  /// Random coefficients on every subset of `x` (the empty set included
  /// when `with_empty`).
  Interaction table_on_subsets(const SiteSet& x, Basis basis, bool with_empty) {
    Interaction h(basis, Scope::absolute);
    for (std::uint64_t m = with_empty ? 0 : 1; m < (std::uint64_t{1} << x.size()); ++m) h.set(x.subset(m), real(-1, 1));
    return h;
  }

  /// Up to `terms` random coefficients on subsets of `x`.
  Interaction sparse_table(const SiteSet& x, std::size_t terms, Basis basis) {
    Interaction h(basis, Scope::absolute);
    for (std::size_t k = 0; k < terms; ++k) h.set(x.subset(bits(x.size())), real(-2, 2));
    return h;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

/// Runs `property(gen)` for `cases` seeds derived from `seed`.
template <class F>
void for_all(int cases, std::uint64_t seed, F&& property) {
  for (int k = 0; k < cases; ++k) {
    const std::uint64_t case_seed = seed * 1000003 + static_cast<std::uint64_t>(k);
    SCOPED_TRACE("case seed " + std::to_string(case_seed));
    Gen gen(case_seed);
    property(gen);
    if (::testing::Test::HasFatalFailure()) return;
  }
}

}  // namespace lgrg::testing
