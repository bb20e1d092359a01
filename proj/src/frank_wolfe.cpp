#include "fairgame/frank_wolfe.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fairgame/errors.hpp"

namespace fairgame {

namespace {

std::vector<double> apply_map(const std::vector<std::vector<double>>& map,
                              const std::vector<double>& x) {
  std::vector<double> u(map.size(), 0.0);
  for (std::size_t i = 0; i < map.size(); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < x.size(); ++j) s += map[i][j] * x[j];
    u[i] = s;
  }
  return u;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

// Exact-ish maximizer of the concave 1-d slice g(t) = phi(U(x + t d)) on
// [0, hi] by golden-section, with the right endpoint checked explicitly.
double golden_max(const std::vector<std::vector<double>>& map, const FairnessFunction& phi,
                  const std::vector<double>& x, const std::vector<double>& d, double hi) {
  auto eval = [&](double t) {
    std::vector<double> p(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) p[j] = x[j] + t * d[j];
    const std::vector<double> u = apply_map(map, p);
    return phi.value(u);
  };
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0, b = hi;
  double c1 = b - invphi * (b - a), c2 = a + invphi * (b - a);
  double f1 = eval(c1), f2 = eval(c2);
  for (int it = 0; it < 90 && b - a > 1e-14 * std::max(1.0, hi); ++it) {
    if (f1 < f2) {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + invphi * (b - a);
      f2 = eval(c2);
    } else {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - invphi * (b - a);
      f1 = eval(c1);
    }
  }
  const double mid = (a + b) / 2;
  return eval(hi) >= eval(mid) ? hi : mid;
}

struct AtomSet {
  std::vector<std::vector<double>> atoms;
  std::vector<double> weights;

  int find(const std::vector<double>& v) const {
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      double diff = 0;
      for (std::size_t j = 0; j < v.size(); ++j)
        diff = std::max(diff, std::abs(atoms[k][j] - v[j]));
      if (diff <= 1e-12) return static_cast<int>(k);
    }
    return -1;
  }

  void drop_zeroes() {
    for (std::size_t k = atoms.size(); k-- > 0;) {
      if (weights[k] <= 1e-15) {
        atoms.erase(atoms.begin() + k);
        weights.erase(weights.begin() + k);
      }
    }
  }

  std::vector<double> combine(std::size_t dim) const {
    std::vector<double> x(dim, 0.0);
    for (std::size_t k = 0; k < atoms.size(); ++k)
      for (std::size_t j = 0; j < dim; ++j) x[j] += weights[k] * atoms[k][j];
    return x;
  }
};

}  // namespace

FwResult maximize_concave(const LinearSystem& sys, const FairnessFunction& phi,
                          const std::vector<std::vector<double>>& utility_map,
                          const FwOptions& opts) {
  if (static_cast<int>(utility_map.size()) != phi.num_players())
    throw ValidationError("utility map must have one row per player");
  for (const auto& row : utility_map)
    if (static_cast<int>(row.size()) != sys.num_vars)
      throw ValidationError("utility map width differs from num_vars");

  auto oracle = [&](const std::vector<double>& cost) {
    LpSolution sol = lp_solve(sys, cost, LpSense::Maximize);
    if (sol.status == LpStatus::Infeasible)
      throw InfeasibleError("constraint system is infeasible");
    if (sol.status == LpStatus::Unbounded)
      throw NumericalBreakdown("feasible set is unbounded along the oracle direction");
    return sol.x;
  };

  FwResult out;

  if (phi.kind() == FairnessFunction::Kind::Linear) {
    std::vector<double> cost(sys.num_vars, 0.0);
    for (int i = 0; i < phi.num_players(); ++i)
      for (int j = 0; j < sys.num_vars; ++j) cost[j] += phi.weights()[i] * utility_map[i][j];
    out.x = oracle(cost);
    out.utilities = apply_map(utility_map, out.x);
    out.value = phi.value(out.utilities);
    out.gap = 0;
    out.iterations = 1;
    out.converged = true;
    return out;
  }

  const bool away = opts.away_steps && opts.line_search;

  AtomSet active;
  active.atoms.push_back(oracle(std::vector<double>(sys.num_vars, 0.0)));
  active.weights.push_back(1.0);
  std::vector<double> x = active.atoms[0];

  for (int k = 0; k < opts.max_iters; ++k) {
    const std::vector<double> u = apply_map(utility_map, x);
    const std::vector<double> g = phi.supergradient(u);
    std::vector<double> cost(sys.num_vars, 0.0);
    for (int i = 0; i < phi.num_players(); ++i)
      for (int j = 0; j < sys.num_vars; ++j) cost[j] += g[i] * utility_map[i][j];

    const std::vector<double> s = oracle(cost);
    std::vector<double> d_fw(sys.num_vars);
    for (int j = 0; j < sys.num_vars; ++j) d_fw[j] = s[j] - x[j];
    const double gap = dot(cost, d_fw);
    out.gap = gap;
    out.iterations = k + 1;
    if (gap <= opts.gap_tol) {
      out.converged = true;
      break;
    }

    bool use_away = false;
    int worst = -1;
    if (away && active.atoms.size() > 1) {
      double worst_val = kInf;
      for (std::size_t a = 0; a < active.atoms.size(); ++a) {
        const double v = dot(cost, active.atoms[a]);
        if (v < worst_val) {
          worst_val = v;
          worst = static_cast<int>(a);
        }
      }
      std::vector<double> d_away(sys.num_vars);
      for (int j = 0; j < sys.num_vars; ++j) d_away[j] = x[j] - active.atoms[worst][j];
      use_away = dot(cost, d_away) > gap;
    }

    if (use_away) {
      const double wa = active.weights[worst];
      const double hi = wa / (1.0 - wa);
      std::vector<double> d(sys.num_vars);
      for (int j = 0; j < sys.num_vars; ++j) d[j] = x[j] - active.atoms[worst][j];
      const double step = golden_max(utility_map, phi, x, d, hi);
      const double scale = 1.0 + step;
      for (double& w : active.weights) w *= scale;
      active.weights[worst] -= step;
      active.drop_zeroes();
    } else {
      double step;
      if (opts.line_search) {
        step = golden_max(utility_map, phi, x, d_fw, 1.0);
      } else {
        step = 2.0 / (k + 2.0);
      }
      for (double& w : active.weights) w *= 1.0 - step;
      const int idx = active.find(s);
      if (idx >= 0) {
        active.weights[idx] += step;
      } else {
        active.atoms.push_back(s);
        active.weights.push_back(step);
      }
      active.drop_zeroes();
    }

    // Rebuild x as the exact convex combination to avoid numeric drift.
    double wsum = 0;
    for (double w : active.weights) wsum += w;
    for (double& w : active.weights) w /= wsum;
    x = active.combine(sys.num_vars);
  }

  out.x = std::move(x);
  out.utilities = apply_map(utility_map, out.x);
  out.value = phi.value(out.utilities);
  return out;
}

}  // namespace fairgame
