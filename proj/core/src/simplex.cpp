#include "lgrg/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace lgrg {

namespace {

// Tableau rows 0..m-1 are constraints, row m the objective (maximize -c^T x
// stored as reduced costs), row m+1 the phase-one objective. Column n is the
// artificial variable, column n+1 the right-hand side.
class Tableau {
 public:
  Tableau(const Matrix& A, const std::vector<double>& b, const std::vector<double>& c, const SimplexOptions& opt)
      : m_(b.size()), n_(c.size()), w_(n_ + 2), d_((m_ + 2) * w_, 0.0), basic_(m_), nonbasic_(n_ + 1), opt_(opt) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (A[i].size() != n_) throw std::invalid_argument("constraint row has wrong width");
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = A[i][j];
      at(i, n_) = -1.0;
      at(i, n_ + 1) = b[i];
      basic_[i] = static_cast<long>(n_ + i);
    }
    for (std::size_t j = 0; j < n_; ++j) {
      nonbasic_[j] = static_cast<long>(j);
      at(m_, j) = c[j];
    }
    nonbasic_[n_] = -1;
    at(m_ + 1, n_) = 1.0;
  }

  LpSolution solve() {
    LpSolution out;
    std::size_t r = 0;
    for (std::size_t i = 1; i < m_; ++i)
      if (at(i, n_ + 1) < at(r, n_ + 1)) r = i;
    if (m_ > 0 && at(r, n_ + 1) < -opt_.tolerance) {
      pivot(r, n_);
      if (!run(m_ + 1, true) || at(m_ + 1, n_ + 1) < -opt_.tolerance) {
        out.status = LpStatus::infeasible;
        finish(out);
        return out;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (basic_[i] != -1) continue;
        std::size_t s = n_ + 1;
        double best = opt_.tolerance;
        for (std::size_t j = 0; j <= n_; ++j) {
          if (std::abs(at(i, j)) > best) {
            best = std::abs(at(i, j));
            s = j;
          }
        }
        if (s <= n_) pivot(i, s);
      }
    }
    if (!run(m_, false)) {
      out.status = LpStatus::unbounded;
      finish(out);
      return out;
    }
    out.status = LpStatus::optimal;
    out.x.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basic_[i] >= 0 && static_cast<std::size_t>(basic_[i]) < n_) out.x[static_cast<std::size_t>(basic_[i])] = at(i, n_ + 1);
    out.objective = -at(m_, n_ + 1);
    finish(out);
    return out;
  }

 private:
  double& at(std::size_t i, std::size_t j) { return d_[i * w_ + j]; }

  void finish(LpSolution& out) const {
    out.iterations = iterations_;
    out.used_bland = bland_;
  }

  void pivot(std::size_t r, std::size_t s) {
    const double inv = 1.0 / at(r, s);
    double* prow = &d_[r * w_];
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      double* row = &d_[i * w_];
      const double factor = row[s] * inv;
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < w_; ++j)
        if (j != s) row[j] -= prow[j] * factor;
      row[s] = -factor;
    }
    for (std::size_t j = 0; j < w_; ++j)
      if (j != s) prow[j] *= inv;
    prow[s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
    if (++iterations_ > opt_.max_iterations) {
      throw SimplexIterationLimit("simplex exceeded " + std::to_string(opt_.max_iterations) + " iterations (m=" +
                                  std::to_string(m_) + ", n=" + std::to_string(n_) + ")");
    }
  }

  // Minimizes the objective in row `x`; false when unbounded.
  bool run(std::size_t x, bool phase_one) {
    while (true) {
      std::size_t s = n_ + 1;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (!phase_one && nonbasic_[j] == -1) continue;
        if (at(x, j) >= -opt_.tolerance) continue;
        if (s > n_) {
          s = j;
        } else if (bland_) {
          if (nonbasic_[j] < nonbasic_[s]) s = j;
        } else if (at(x, j) < at(x, s)) {
          s = j;
        }
      }
      if (s > n_) return true;

      std::size_t r = m_;
      double best = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (at(i, s) <= opt_.tolerance) continue;
        const double ratio = at(i, n_ + 1) / at(i, s);
        if (r == m_ || ratio < best || (ratio == best && basic_[i] < basic_[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r == m_) return false;
      if (std::abs(best) <= opt_.tolerance) {
        if (++degenerate_run_ >= opt_.degenerate_switch) bland_ = true;
      } else {
        degenerate_run_ = 0;
      }
      pivot(r, s);
    }
  }

  std::size_t m_, n_, w_;
  std::vector<double> d_;
  std::vector<long> basic_, nonbasic_;
  SimplexOptions opt_;
  std::size_t iterations_ = 0;
  std::size_t degenerate_run_ = 0;
  bool bland_ = false;
};

}  // namespace

LpSolution solve_lp(const Matrix& A, const std::vector<double>& b, const std::vector<double>& c,
                    const SimplexOptions& options) {
  if (A.size() != b.size()) throw std::invalid_argument("A and b disagree in row count");
  Tableau t(A, b, c, options);
  return t.solve();
}

double max_residual(const Matrix& A, const std::vector<double>& f, const std::vector<double>& d) {
  double worst = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    double ad = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) ad += A[i][j] * d[j];
    worst = std::max(worst, std::abs(f[i] - ad));
  }
  return worst;
}

MinimaxSolution simplex_minimax(const Matrix& A, const std::vector<double>& f, const SimplexOptions& options) {
  if (A.size() != f.size()) throw std::invalid_argument("design matrix and targets disagree in row count");
  const std::size_t k = A.empty() ? 0 : A[0].size();
  for (const auto& row : A)
    if (row.size() != k) throw std::invalid_argument("ragged design matrix");

  std::map<std::vector<double>, std::pair<double, double>> merged;
  for (std::size_t i = 0; i < A.size(); ++i) {
    auto [it, inserted] = merged.try_emplace(A[i], f[i], f[i]);
    if (!inserted) {
      it->second.first = std::min(it->second.first, f[i]);
      it->second.second = std::max(it->second.second, f[i]);
    }
  }

  // Variables (d+, d-, eps) >= 0:  A d - eps <= f_min,  -A d - eps <= -f_max.
  const std::size_t n = 2 * k + 1;
  Matrix rows;
  std::vector<double> rhs;
  rows.reserve(2 * merged.size());
  for (const auto& [a, range] : merged) {
    std::vector<double> up(n, 0.0), down(n, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      up[j] = a[j];
      up[k + j] = -a[j];
      down[j] = -a[j];
      down[k + j] = a[j];
    }
    up[2 * k] = -1.0;
    down[2 * k] = -1.0;
    rows.push_back(std::move(up));
    rhs.push_back(range.first);
    rows.push_back(std::move(down));
    rhs.push_back(-range.second);
  }
  std::vector<double> cost(n, 0.0);
  cost[2 * k] = 1.0;

  const LpSolution lp = solve_lp(rows, rhs, cost, options);
  if (lp.status != LpStatus::optimal) throw std::runtime_error("minimax LP did not reach an optimum");

  MinimaxSolution out;
  out.d.resize(k);
  for (std::size_t j = 0; j < k; ++j) out.d[j] = lp.x[j] - lp.x[k + j];
  out.epsilon = max_residual(A, f, out.d);
  out.iterations = lp.iterations;
  out.distinct_rows = merged.size();
  return out;
}

}  // namespace lgrg
