#pragma once

#include <cstddef>
#include <vector>

namespace redsim {

// maximize c'x  subject to  Ax <= b, x >= 0, with b >= 0.
// The all-slack basis is feasible, so no phase-1 is needed.
struct LpProblem {
  struct Row {
    std::vector<std::pair<std::size_t, double>> terms;  // (variable, coeff)
    double rhs = 0.0;
  };
  std::size_t n_vars = 0;
  std::vector<double> objective;
  std::vector<Row> rows;
};

struct LpSolution {
  std::vector<double> values;
  double objective = 0.0;
  std::size_t iterations = 0;
};

// Dense tableau simplex. Dantzig pricing with a Bland fallback once the
// iteration count suggests stalling, so termination is guaranteed.
LpSolution solve_lp(const LpProblem& lp);

}  // namespace redsim
