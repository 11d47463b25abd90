#include "redsim/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace redsim {

namespace {
constexpr double kTol = 1e-9;
}

LpSolution solve_lp(const LpProblem& lp) {
  const std::size_t m = lp.rows.size();
  const std::size_t n = lp.n_vars;
  const std::size_t cols = n + m;  // structural + slack

  for (const auto& row : lp.rows)
    if (row.rhs < -kTol)
      throw std::runtime_error("lp: negative rhs, all-slack basis infeasible");

  // Tableau: m constraint rows plus the objective row (stored negated so
  // optimality is "no negative entries").
  std::vector<std::vector<double>> tab(m + 1, std::vector<double>(cols + 1, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [j, a] : lp.rows[i].terms) tab[i][j] += a;
    tab[i][n + i] = 1.0;
    tab[i][cols] = std::max(lp.rows[i].rhs, 0.0);
  }
  for (std::size_t j = 0; j < n; ++j) tab[m][j] = -lp.objective[j];

  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  const std::size_t bland_after = 20 * (m + n) + 200;
  const std::size_t max_iter = 200 * (m + n) + 2000;
  std::size_t iter = 0;

  while (true) {
    // Entering column.
    std::size_t enter = cols;
    if (iter < bland_after) {
      double best = -kTol;
      for (std::size_t j = 0; j < cols; ++j)
        if (tab[m][j] < best) {
          best = tab[m][j];
          enter = j;
        }
    } else {
      for (std::size_t j = 0; j < cols; ++j)
        if (tab[m][j] < -kTol) {
          enter = j;
          break;
        }
    }
    if (enter == cols) break;  // optimal

    // Ratio test; ties to the smallest basis index.
    std::size_t leave = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (tab[i][enter] > kTol) {
        double ratio = tab[i][cols] / tab[i][enter];
        if (ratio < best_ratio - kTol ||
            (ratio < best_ratio + kTol && (leave == m || basis[i] < basis[leave])))
        {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave == m)
      throw std::runtime_error("lp: unbounded objective");

    // Pivot.
    const double pivot = tab[leave][enter];
    for (std::size_t j = 0; j <= cols; ++j) tab[leave][j] /= pivot;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = tab[i][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols; ++j) tab[i][j] -= f * tab[leave][j];
    }
    basis[leave] = enter;

    if (++iter > max_iter)
      throw std::runtime_error("lp: iteration limit exceeded");
  }

  LpSolution sol;
  sol.values.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) sol.values[basis[i]] = std::max(tab[i][cols], 0.0);
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    sol.objective += lp.objective[j] * sol.values[j];
  sol.iterations = iter;
  return sol;
}

}  // namespace redsim
