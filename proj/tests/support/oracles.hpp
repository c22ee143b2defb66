#pragma once

// Brute-force references written without the library's algorithms: window
// enumeration of site sets, spin-basis partition sums, and Chebyshev fits by
// vertex enumeration.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <utility>
#include <vector>

namespace lgrg::testing {

using Pt = std::pair<int, int>;
using PtSet = std::vector<Pt>;  // kept sorted

inline double naive_size(const PtSet& y) {
  double cx = 0, cy = 0;
  for (auto [x, v] : y) cx += x, cy += v;
  cx /= static_cast<double>(y.size());
  cy /= static_cast<double>(y.size());
  double s = 0;
  for (auto [x, v] : y) s += (x - cx) * (x - cx) + (v - cy) * (v - cy);
  return s;
}

inline PtSet naive_translate(PtSet y) {
  int mx = std::numeric_limits<int>::max(), my = mx;
  for (auto [x, v] : y) mx = std::min(mx, x), my = std::min(my, v);
  for (auto& p : y) p = {p.first - mx, p.second - my};
  std::sort(y.begin(), y.end());
  return y;
}

// Sites listed row by row (y, then x).
inline PtSet reading_key(const PtSet& y) {
  PtSet k;
  for (auto [x, v] : y) k.push_back({v, x});
  std::sort(k.begin(), k.end());
  return k;
}

/// Translate of the dihedral image that comes first in reading order.
inline PtSet naive_dihedral(const PtSet& y) {
  PtSet best;
  for (int g = 0; g < 8; ++g) {
    PtSet img;
    for (auto [x, v] : y) {
      int a = x, b = v;
      for (int r = 0; r < (g & 3); ++r) std::tie(a, b) = std::make_pair(-b, a);
      if (g & 4) a = -a;
      img.push_back({a, b});
    }
    img = naive_translate(img);
    if (best.empty() || reading_key(img) < reading_key(best)) best = img;
  }
  return best;
}

/// Visits every nonempty subset of `window` with size <= cutoff; relies only
/// on the size being monotone under inclusion to prune.
inline void window_sets(const std::vector<Pt>& window, double cutoff, const std::function<void(const PtSet&)>& visit) {
  PtSet cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    for (std::size_t k = start; k < window.size(); ++k) {
      cur.push_back(window[k]);
      PtSet sorted = cur;
      std::sort(sorted.begin(), sorted.end());
      if (naive_size(sorted) <= cutoff + 1e-9) {
        visit(sorted);
        rec(k + 1);
      }
      cur.pop_back();
    }
  };
  rec(0);
}

/// Translation (or dihedral) class representatives with size <= cutoff.
/// Two sites of such a set are at squared distance <= 2 cutoff, so every
/// class has a translate inside a k x k window anchored at the origin.
inline std::set<PtSet> brute_classes(double cutoff, bool dihedral) {
  const int k = static_cast<int>(std::floor(std::sqrt(2 * cutoff + 1e-9))) + 1;
  std::vector<Pt> window;
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) window.push_back({x, y});
  std::set<PtSet> out;
  window_sets(window, cutoff, [&](const PtSet& s) { out.insert(dihedral ? naive_dihedral(s) : naive_translate(s)); });
  return out;
}

/// Sets meeting the block with sites (0,0),(1,0),(0,1),(1,1), size <= cutoff.
inline std::size_t brute_block_collection_count(double cutoff) {
  const int r = static_cast<int>(std::floor(std::sqrt(2 * cutoff + 1e-9)));
  std::vector<Pt> window;
  for (int x = -r; x <= 1 + r; ++x)
    for (int y = -r; y <= 1 + r; ++y) window.push_back({x, y});
  std::size_t count = 0;
  window_sets(window, cutoff, [&](const PtSet& s) {
    for (auto [x, y] : s)
      if (x >= 0 && x <= 1 && y >= 0 && y <= 1) {
        ++count;
        return;
      }
  });
  return count;
}

/// -ln of the constrained partition sum on nx x ny blocks, free boundaries,
/// by direct enumeration of spins sigma = +-1. `minus_blocks` lists blocks
/// whose block spin is -1 (gas value 1).
inline double naive_hbar(int nx, int ny, double beta, const std::set<Pt>& minus_blocks) {
  const int w = 2 * nx, h = 2 * ny, n = w * h;
  auto id = [h](int x, int y) { return x * h + y; };
  long double z = 0;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << n); ++c) {
    auto spin = [c](int i) { return (c >> i) & 1 ? -1 : 1; };
    long double weight = 1;
    for (int i = 0; i < nx && weight != 0; ++i)
      for (int j = 0; j < ny && weight != 0; ++j) {
        const int s = spin(id(2 * i, 2 * j)) + spin(id(2 * i + 1, 2 * j)) + spin(id(2 * i, 2 * j + 1)) +
                      spin(id(2 * i + 1, 2 * j + 1));
        const int block_spin = minus_blocks.count({i, j}) ? -1 : 1;
        if (s == 0)
          weight *= 0.5L;
        else if ((s > 0) != (block_spin > 0))
          weight = 0;
      }
    if (weight == 0) continue;
    int e = 0;
    for (int x = 0; x < w; ++x)
      for (int y = 0; y < h; ++y) {
        if (x + 1 < w) e += spin(id(x, y)) * spin(id(x + 1, y));
        if (y + 1 < h) e += spin(id(x, y)) * spin(id(x, y + 1));
      }
    z += weight * std::exp(static_cast<long double>(beta) * e);
  }
  return -static_cast<double>(std::log(z));
}

/// Solves the square system M x = r by Gaussian elimination with partial
/// pivoting; returns false when singular.
inline bool solve_square(std::vector<std::vector<double>> m, std::vector<double> r, std::vector<double>& x) {
  const std::size_t n = r.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(m[i][c]) > std::abs(m[p][c])) p = i;
    if (std::abs(m[p][c]) < 1e-10) return false;
    std::swap(m[p], m[c]);
    std::swap(r[p], r[c]);
    for (std::size_t i = c + 1; i < n; ++i) {
      const double q = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= q * m[c][j];
      r[i] -= q * r[c];
    }
  }
  x.assign(n, 0);
  for (std::size_t c = n; c-- > 0;) {
    double s = r[c];
    for (std::size_t j = c + 1; j < n; ++j) s -= m[c][j] * x[j];
    x[c] = s / m[c][c];
  }
  return true;
}

/// Optimal Chebyshev error min_d max_i |f_i - (A d)_i| by enumerating the
/// vertices of { (d, eps) : -eps <= f_i - A_i d <= eps }. Each vertex makes
/// k+1 constraints active; the least feasible eps over vertices is optimal
/// when A has full column rank.
inline double vertex_minimax(const std::vector<std::vector<double>>& a, const std::vector<double>& f) {
  const std::size_t m = a.size(), k = a[0].size(), vars = k + 1;
  // Constraint rows (A_i, -1) . (d, eps) <= f_i  and  (-A_i, -1) . (d, eps) <= -f_i.
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (std::size_t i = 0; i < m; ++i) {
    auto p = a[i];
    p.push_back(-1);
    rows.push_back(p);
    rhs.push_back(f[i]);
    auto q = a[i];
    for (auto& v : q) v = -v;
    q.push_back(-1);
    rows.push_back(q);
    rhs.push_back(-f[i]);
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(vars);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t start) {
    if (depth == vars) {
      std::vector<std::vector<double>> mm;
      std::vector<double> rr;
      for (auto p : pick) mm.push_back(rows[p]), rr.push_back(rhs[p]);
      std::vector<double> x;
      if (!solve_square(mm, rr, x)) return;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        double s = 0;
        for (std::size_t j = 0; j < vars; ++j) s += rows[r][j] * x[j];
        if (s > rhs[r] + 1e-9) return;
      }
      best = std::min(best, x[k]);
      return;
    }
    for (std::size_t r = start; r < rows.size(); ++r) {
      pick[depth] = r;
      rec(depth + 1, r + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace lgrg::testing
