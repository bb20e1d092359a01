#pragma once

#include <vector>

#include "fairgame/fairness.hpp"
#include "fairgame/linear_system.hpp"

namespace fairgame {

// Frank-Wolfe settings. The default configuration uses away steps with exact
// (golden-section) line search, which converges linearly over a polytope.
// line_search=false selects the classic open-loop 2/(k+2) schedule (away
// steps are disabled in that mode); it has the textbook O(1/k) value gap.
struct FwOptions {
  int max_iters = 10000;
  double gap_tol = 1e-6;
  bool away_steps = true;
  bool line_search = true;
};

struct FwResult {
  std::vector<double> x;          // point in the feasible polytope
  std::vector<double> utilities;  // u = utility_map . x
  double value = 0;               // phi(u)
  double gap = 0;                 // final Frank-Wolfe duality gap
  int iterations = 0;
  bool converged = false;
};

// Maximizes phi(U x) over the polytope described by `sys`, where U is the
// dense utility_map (num_players rows, sys.num_vars columns), using lp_solve
// as the linear oracle. A linear phi short-circuits to a single LP call.
// Throws InfeasibleError when the polytope is empty; the polytope must be
// bounded in the directions the oracle explores.
FwResult maximize_concave(const LinearSystem& sys, const FairnessFunction& phi,
                          const std::vector<std::vector<double>>& utility_map,
                          const FwOptions& opts = {});

}  // namespace fairgame
