#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace fairgame {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Dense constraint system
//   a_ub x <= b_ub,  a_eq x = b_eq,  lower <= x <= upper.
// Bounds default to [0, +inf). ub rows may carry a label naming the
// constraint (used by certification reports); labels are optional.
struct LinearSystem {
  int num_vars = 0;
  std::vector<std::vector<double>> a_ub;
  std::vector<double> b_ub;
  std::vector<std::string> ub_labels;
  std::vector<std::vector<double>> a_eq;
  std::vector<double> b_eq;
  std::vector<double> lower, upper;

  LinearSystem() = default;
  explicit LinearSystem(int n)
      : num_vars(n), lower(n, 0.0), upper(n, kInf) {}

  void add_ub(std::vector<double> row, double rhs, std::string label = {}) {
    a_ub.push_back(std::move(row));
    b_ub.push_back(rhs);
    ub_labels.push_back(std::move(label));
  }
  void add_eq(std::vector<double> row, double rhs) {
    a_eq.push_back(std::move(row));
    b_eq.push_back(rhs);
  }

  int num_ub() const { return static_cast<int>(a_ub.size()); }
  int num_eq() const { return static_cast<int>(a_eq.size()); }

  // Shape and bound sanity; throws ValidationError.
  void check() const;
};

enum class LpSense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

// Duals follow the sign convention that makes the textbook pairing
//   max c.x, Ax <= b, x >= 0   <->   min b.y, A'y >= c, y >= 0
// come out with y = ub_duals >= 0; equality duals are unrestricted. At an
// optimum, complementary slackness holds: ub_duals[r] * slack[r] = 0 and
// x[j] * (A' y - c)[j] = 0 (within solver tolerance).
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0;
  // max violation of any row or bound of the input system at x.
  double max_violation = 0;
  std::vector<double> ub_duals, eq_duals;
  int iterations = 0;
};

// Dense two-phase primal simplex with Bland's anti-cycling rule.
// Tolerances: feasibility 1e-9, optimality 1e-8, pivot stability 1e-12.
// Throws NumericalBreakdown if every candidate pivot in a needed column is
// positive but below the stability threshold (so "unbounded" is only reported
// when a whole column is nonpositive).
LpSolution lp_solve(const LinearSystem& sys, std::span<const double> cost, LpSense sense);

}  // namespace fairgame
