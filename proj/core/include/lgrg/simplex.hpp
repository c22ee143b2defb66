#pragma once

// Dense two-phase primal simplex on a Jordan-exchange tableau, and the
// minimax (Chebyshev) fit built on it.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lgrg {

using Matrix = std::vector<std::vector<double>>;

class SimplexIterationLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::optimal;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
  bool used_bland = false;
};

struct SimplexOptions {
  std::size_t max_iterations = 1'000'000;
  double tolerance = 1e-9;
  /// Consecutive degenerate pivots tolerated under Dantzig pricing before
  /// switching to Bland's rule for the rest of the solve.
  std::size_t degenerate_switch = 50;
};

/// min c^T x subject to A x <= b, x >= 0. Phase one adds a single artificial
/// column. Throws SimplexIterationLimit past options.max_iterations.
LpSolution solve_lp(const Matrix& A, const std::vector<double>& b, const std::vector<double>& c,
                    const SimplexOptions& options = {});

struct MinimaxSolution {
  std::vector<double> d;
  double epsilon = 0.0;  // max_i |f_i - (A d)_i|, recomputed from d
  std::size_t iterations = 0;
  std::size_t distinct_rows = 0;
};

/// min over d of max_i |f_i - (A d)_i| with d free. Rows of A that coincide
/// exactly are merged into one pair of constraints on [min f, max f].
MinimaxSolution simplex_minimax(const Matrix& A, const std::vector<double>& f, const SimplexOptions& options = {});

double max_residual(const Matrix& A, const std::vector<double>& f, const std::vector<double>& d);

}  // namespace lgrg
