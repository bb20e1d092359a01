#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fairgame/errors.hpp"
#include "fairgame/linear_system.hpp"

namespace fairgame {

namespace {
constexpr double kFeasTol = 1e-9;
constexpr double kOptTol = 1e-8;
// Entries below this are treated as eliminated. Accepting smaller pivots lets
// cancellation debris into the basis and multiplies its row by the reciprocal.
constexpr double kPivotTol = 1e-8;
}  // namespace

void LinearSystem::check() const {
  if (num_vars < 0) throw ValidationError("linear system has negative variable count");
  auto check_rows = [&](const std::vector<std::vector<double>>& a,
                        const std::vector<double>& b, const char* what) {
    if (a.size() != b.size())
      throw ValidationError(std::string(what) + " row/rhs counts differ");
    for (const auto& row : a)
      if (static_cast<int>(row.size()) != num_vars)
        throw ValidationError(std::string(what) + " row width differs from num_vars");
    for (double v : b)
      if (std::isnan(v)) throw ValidationError(std::string(what) + " rhs is NaN");
  };
  check_rows(a_ub, b_ub, "ub");
  check_rows(a_eq, b_eq, "eq");
  if (static_cast<int>(lower.size()) != num_vars || static_cast<int>(upper.size()) != num_vars)
    throw ValidationError("bound vectors must have num_vars entries");
  for (int j = 0; j < num_vars; ++j)
    if (!(lower[j] <= upper[j])) throw ValidationError("variable bounds cross");
}

namespace {

// Substitution that turns a user variable into nonnegative internal ones.
struct VarMap {
  enum Kind { Shift, Mirror, Split } kind;
  int col = -1, col_neg = -1;  // internal columns
  double offset = 0;           // x = offset + y (Shift), x = offset - y (Mirror)
};

struct Tableau {
  int rows = 0, cols = 0;
  std::vector<double> a;  // rows x cols, row-major
  std::vector<double> rhs;
  std::vector<int> basis;
  std::vector<bool> active;

  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

  void pivot(int pr, int pc) {
    const double piv = at(pr, pc);
    const double inv = 1.0 / piv;
    for (int c = 0; c < cols; ++c) at(pr, c) *= inv;
    rhs[pr] *= inv;
    at(pr, pc) = 1.0;
    for (int r = 0; r < rows; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c < cols; ++c) at(r, c) -= f * at(pr, c);
      rhs[r] -= f * rhs[pr];
      at(r, pc) = 0.0;
    }
    basis[pr] = pc;
  }
};

// Reduced-cost row for the given column costs; d_j = c_j - c_B . (B^-1 a_j).
std::vector<double> reduced_costs(const Tableau& t, const std::vector<double>& cost) {
  std::vector<double> d = cost;
  for (int r = 0; r < t.rows; ++r) {
    if (!t.active[r]) continue;
    const double cb = cost[t.basis[r]];
    if (cb == 0.0) continue;
    for (int c = 0; c < t.cols; ++c) d[c] -= cb * t.at(r, c);
  }
  return d;
}

// One simplex phase: Bland entering (smallest eligible column), ratio test
// with Bland tie-break on the leaving basic variable. `allowed[c]` bars
// columns (artificials in phase 2). Returns LpStatus::Optimal or Unbounded.
LpStatus run_phase(Tableau& t, const std::vector<double>& cost, const std::vector<bool>& allowed,
                   int& iterations) {
  std::vector<double> d = reduced_costs(t, cost);
  const int iter_cap = 2000 * (t.rows + t.cols) + 10000;
  for (;;) {
    int enter = -1;
    for (int c = 0; c < t.cols; ++c) {
      if (!allowed[c]) continue;
      if (d[c] < -kOptTol) {
        enter = c;
        break;
      }
    }
    if (enter < 0) return LpStatus::Optimal;

    int leave = -1;
    double best_ratio = 0;
    double col_max = 0;
    for (int r = 0; r < t.rows; ++r) {
      if (!t.active[r]) continue;
      const double arc = t.at(r, enter);
      col_max = std::max(col_max, arc);
      if (arc <= kPivotTol) continue;
      const double ratio = t.rhs[r] / arc;
      if (leave < 0 || ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 && t.basis[r] < t.basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave < 0) {
      if (col_max > 0)
        throw NumericalBreakdown("simplex: only sub-threshold pivots available");
      return LpStatus::Unbounded;
    }

    t.pivot(leave, enter);
    // Update reduced costs in place: after the pivot, d <- d - d_enter * (pivot row).
    const double de = d[enter];
    if (de != 0.0) {
      for (int c = 0; c < t.cols; ++c) d[c] -= de * t.at(leave, c);
      d[enter] = 0.0;
    }
    if (++iterations > iter_cap)
      throw NumericalBreakdown("simplex: iteration cap exceeded");
  }
}

}  // namespace

LpSolution lp_solve(const LinearSystem& sys, std::span<const double> cost, LpSense sense) {
  sys.check();
  if (static_cast<int>(cost.size()) != sys.num_vars)
    throw ValidationError("cost vector width differs from num_vars");

  // Internal problem is a minimization.
  const double sign = sense == LpSense::Maximize ? -1.0 : 1.0;

  // Variable substitutions to y >= 0 and collection of finite upper bounds
  // that become extra <= rows.
  std::vector<VarMap> vmap(sys.num_vars);
  int ncols = 0;
  std::vector<std::pair<int, double>> upper_rows;  // (user var, bound after shift)
  for (int j = 0; j < sys.num_vars; ++j) {
    const double lo = sys.lower[j], up = sys.upper[j];
    if (lo == -kInf && up == kInf) {
      vmap[j] = {VarMap::Split, ncols, ncols + 1, 0.0};
      ncols += 2;
    } else if (lo == -kInf) {
      vmap[j] = {VarMap::Mirror, ncols++, -1, up};
    } else {
      vmap[j] = {VarMap::Shift, ncols++, -1, lo};
      if (up < kInf) upper_rows.push_back({j, up - lo});
    }
  }

  const int n_ub = sys.num_ub(), n_up = static_cast<int>(upper_rows.size()),
            n_eq = sys.num_eq();
  const int m = n_ub + n_up + n_eq;

  // Row assembly in internal columns. Equality rows last.
  std::vector<std::vector<double>> rows(m, std::vector<double>(ncols, 0.0));
  std::vector<double> rhs(m, 0.0);
  std::vector<bool> is_eq(m, false);
  auto emit = [&](int r, int j, double coeff) {
    const VarMap& vm = vmap[j];
    switch (vm.kind) {
      case VarMap::Shift:
        rows[r][vm.col] += coeff;
        rhs[r] -= coeff * vm.offset;
        break;
      case VarMap::Mirror:
        rows[r][vm.col] -= coeff;
        rhs[r] -= coeff * vm.offset;
        break;
      case VarMap::Split:
        rows[r][vm.col] += coeff;
        rows[r][vm.col_neg] -= coeff;
        break;
    }
  };
  for (int r = 0; r < n_ub; ++r) {
    rhs[r] = sys.b_ub[r];
    for (int j = 0; j < sys.num_vars; ++j)
      if (sys.a_ub[r][j] != 0.0) emit(r, j, sys.a_ub[r][j]);
  }
  for (int k = 0; k < n_up; ++k) {
    const int r = n_ub + k;
    rows[r][vmap[upper_rows[k].first].col] = 1.0;
    rhs[r] = upper_rows[k].second;
  }
  for (int k = 0; k < n_eq; ++k) {
    const int r = n_ub + n_up + k;
    is_eq[r] = true;
    rhs[r] = sys.b_eq[k];
    for (int j = 0; j < sys.num_vars; ++j)
      if (sys.a_eq[k][j] != 0.0) emit(r, j, sys.a_eq[k][j]);
  }

  // Slacks for <= rows, then sign-normalize rhs, then artificials where the
  // slack cannot start basic. idcol[r] is the column that begins as the
  // identity column of row r; its final reduced cost yields the row dual.
  const int slack0 = ncols;
  ncols += n_ub + n_up;
  std::vector<double> negated(m, 1.0);
  std::vector<int> idcol(m, -1);
  std::vector<int> art_of_row(m, -1);
  int n_art = 0;
  for (int r = 0; r < m; ++r) {
    if (rhs[r] < 0) {
      negated[r] = -1.0;
      rhs[r] = -rhs[r];
      for (double& v : rows[r]) v = -v;
    }
    if (!is_eq[r]) {
      const int sc = slack0 + r;  // one slack per <= row, in row order
      // coefficient is +1 before negation
      if (negated[r] < 0) {
        art_of_row[r] = n_art++;
      } else {
        idcol[r] = sc;
      }
    } else {
      art_of_row[r] = n_art++;
    }
  }
  const int art0 = ncols;
  ncols += n_art;

  Tableau t;
  t.rows = m;
  t.cols = ncols;
  t.a.assign(static_cast<std::size_t>(m) * ncols, 0.0);
  t.rhs = rhs;
  t.basis.assign(m, -1);
  t.active.assign(m, true);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < slack0; ++c) t.at(r, c) = rows[r][c];
    if (!is_eq[r]) t.at(r, slack0 + r) = negated[r];
    if (art_of_row[r] >= 0) {
      const int ac = art0 + art_of_row[r];
      t.at(r, ac) = 1.0;
      if (idcol[r] < 0) idcol[r] = ac;
      t.basis[r] = ac;
    } else {
      t.basis[r] = slack0 + r;
    }
  }

  LpSolution out;
  std::vector<bool> allowed(ncols, true);

  // Phase 1: minimize the artificial sum.
  if (n_art > 0) {
    std::vector<double> c1(ncols, 0.0);
    for (int k = 0; k < n_art; ++k) c1[art0 + k] = 1.0;
    run_phase(t, c1, allowed, out.iterations);
    double infeas = 0;
    for (int r = 0; r < m; ++r)
      if (t.basis[r] >= art0) infeas += t.rhs[r];
    if (infeas > kFeasTol) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    // Pivot artificials out of the basis, or deactivate redundant rows.
    for (int r = 0; r < m; ++r) {
      if (t.basis[r] < art0) continue;
      int pc = -1;
      for (int c = 0; c < art0; ++c) {
        if (std::abs(t.at(r, c)) > kPivotTol) {
          pc = c;
          break;
        }
      }
      if (pc >= 0) {
        t.pivot(r, pc);
      } else {
        t.active[r] = false;
      }
    }
    for (int k = 0; k < n_art; ++k) allowed[art0 + k] = false;
  }

  // Phase 2.
  std::vector<double> c2(ncols, 0.0);
  for (int j = 0; j < sys.num_vars; ++j) {
    const VarMap& vm = vmap[j];
    const double cj = sign * cost[j];
    switch (vm.kind) {
      case VarMap::Shift:
        c2[vm.col] += cj;
        break;
      case VarMap::Mirror:
        c2[vm.col] -= cj;
        break;
      case VarMap::Split:
        c2[vm.col] += cj;
        c2[vm.col_neg] -= cj;
        break;
    }
  }
  const LpStatus st = run_phase(t, c2, allowed, out.iterations);
  if (st == LpStatus::Unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  // Recover x.
  std::vector<double> y(ncols, 0.0);
  for (int r = 0; r < m; ++r)
    if (t.active[r]) y[t.basis[r]] = t.rhs[r];
  out.x.assign(sys.num_vars, 0.0);
  for (int j = 0; j < sys.num_vars; ++j) {
    const VarMap& vm = vmap[j];
    switch (vm.kind) {
      case VarMap::Shift:
        out.x[j] = vm.offset + y[vm.col];
        break;
      case VarMap::Mirror:
        out.x[j] = vm.offset - y[vm.col];
        break;
      case VarMap::Split:
        out.x[j] = y[vm.col] - y[vm.col_neg];
        break;
    }
  }
  out.objective = 0;
  for (int j = 0; j < sys.num_vars; ++j) out.objective += cost[j] * out.x[j];

  // Row duals from the identity columns' reduced costs. The internal cost c2
  // already carries the sense flip, so lambda_r = d_id * negation gives the
  // nonnegative multiplier of a binding <= row for either sense.
  std::vector<double> d = reduced_costs(t, c2);
  out.ub_duals.assign(n_ub, 0.0);
  out.eq_duals.assign(n_eq, 0.0);
  for (int r = 0; r < m; ++r) {
    if (!t.active[r]) continue;
    const double yr = d[idcol[r]] * negated[r];
    if (r < n_ub)
      out.ub_duals[r] = yr;
    else if (r >= n_ub + n_up)
      out.eq_duals[r - n_ub - n_up] = yr;
  }

  // Residual check against the caller's system.
  double viol = 0;
  for (int r = 0; r < n_ub; ++r) {
    double ax = 0;
    for (int j = 0; j < sys.num_vars; ++j) ax += sys.a_ub[r][j] * out.x[j];
    viol = std::max(viol, ax - sys.b_ub[r]);
  }
  for (int k = 0; k < n_eq; ++k) {
    double ax = 0;
    for (int j = 0; j < sys.num_vars; ++j) ax += sys.a_eq[k][j] * out.x[j];
    viol = std::max(viol, std::abs(ax - sys.b_eq[k]));
  }
  for (int j = 0; j < sys.num_vars; ++j) {
    if (sys.lower[j] > -kInf) viol = std::max(viol, sys.lower[j] - out.x[j]);
    if (sys.upper[j] < kInf) viol = std::max(viol, out.x[j] - sys.upper[j]);
  }
  out.max_violation = viol;
  if (viol > 1e-6) throw NumericalBreakdown("simplex: solution fails the residual check");
  out.status = LpStatus::Optimal;
  return out;
}

}  // namespace fairgame
