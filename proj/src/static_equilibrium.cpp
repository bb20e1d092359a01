#include "fairgame/static_equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "fairgame/errors.hpp"

namespace fairgame {

const char* to_string(EqKind kind) {
  switch (kind) {
    case EqKind::NE: return "ne";
    case EqKind::CE: return "ce";
    case EqKind::CCE: return "cce";
  }
  return "?";
}

EqKind eq_kind_from_string(const std::string& s) {
  if (s == "ne") return EqKind::NE;
  if (s == "ce") return EqKind::CE;
  if (s == "cce") return EqKind::CCE;
  throw ParseError("unknown equilibrium kind '" + s + "' (expected ne, ce or cce)");
}

double average_utility(const GameSpec& game, int player, std::int64_t a) {
  double s = 0;
  for (std::int64_t w = 0; w < game.num_joint_events(); ++w) {
    const double p = game.event_prob(w);
    if (p > 0) s += p * game.utility(player, a, w);
  }
  return s;
}

std::vector<double> expected_utilities(const GameSpec& game, const JointPmf& pmf) {
  std::vector<double> u(game.num_players(), 0.0);
  for (int i = 0; i < game.num_players(); ++i)
    for (std::int64_t a = 0; a < game.num_joint_actions(); ++a)
      if (pmf[a] > 0) u[i] += pmf[a] * average_utility(game, i, a);
  return u;
}

namespace {

// Dense ubar_i(a) table; static constraints and objectives only see this.
std::vector<std::vector<double>> average_tables(const GameSpec& game) {
  std::vector<std::vector<double>> t(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    t[i].resize(game.num_joint_actions());
    for (std::int64_t a = 0; a < game.num_joint_actions(); ++a)
      t[i][a] = average_utility(game, i, a);
  }
  return t;
}

}  // namespace

LinearSystem build_cce_constraints(const GameSpec& game) {
  const std::int64_t A = game.num_joint_actions();
  const auto ubar = average_tables(game);
  LinearSystem sys(static_cast<int>(A));
  for (int i = 0; i < game.num_players(); ++i) {
    for (int b = 0; b < game.num_actions(i); ++b) {
      std::vector<double> row(A, 0.0);
      for (std::int64_t a = 0; a < A; ++a)
        row[a] = ubar[i][game.with_action(a, i, b)] - ubar[i][a];
      sys.add_ub(std::move(row), 0.0,
                 "p" + std::to_string(i + 1) + " dev=" + game.action_label(i, b));
    }
  }
  sys.add_eq(std::vector<double>(A, 1.0), 1.0);
  return sys;
}

LinearSystem build_ce_constraints(const GameSpec& game) {
  const std::int64_t A = game.num_joint_actions();
  const auto ubar = average_tables(game);
  LinearSystem sys(static_cast<int>(A));
  for (int i = 0; i < game.num_players(); ++i) {
    for (int av = 0; av < game.num_actions(i); ++av) {
      for (int b = 0; b < game.num_actions(i); ++b) {
        if (b == av) continue;
        std::vector<double> row(A, 0.0);
        for (std::int64_t a = 0; a < A; ++a) {
          if (game.action_space().digit(a, i) != av) continue;
          row[a] = ubar[i][game.with_action(a, i, b)] - ubar[i][a];
        }
        sys.add_ub(std::move(row), 0.0,
                   "p" + std::to_string(i + 1) + " " + game.action_label(i, av) + "->" +
                       game.action_label(i, b));
      }
    }
  }
  sys.add_eq(std::vector<double>(A, 1.0), 1.0);
  return sys;
}

CertificationReport certify(const GameSpec& game, const JointPmf& pmf, EqKind kind, double tol) {
  CertificationReport rep;
  rep.kind = kind;
  rep.tolerance = tol;
  rep.utilities = expected_utilities(game, pmf);

  const LinearSystem sys =
      kind == EqKind::CE ? build_ce_constraints(game) : build_cce_constraints(game);
  rep.worst_violation = -kInf;
  for (int r = 0; r < sys.num_ub(); ++r) {
    double lhs = 0;
    for (std::int64_t a = 0; a < game.num_joint_actions(); ++a) lhs += sys.a_ub[r][a] * pmf[a];
    const double v = lhs - sys.b_ub[r];
    if (v > rep.worst_violation) {
      rep.worst_violation = v;
      rep.worst_constraint = sys.ub_labels[r];
    }
  }

  if (kind == EqKind::NE) {
    // Product form: the pmf must factor into its per-player marginals.
    std::vector<std::vector<double>> marg(game.num_players());
    for (int i = 0; i < game.num_players(); ++i) marg[i].assign(game.num_actions(i), 0.0);
    for (std::int64_t a = 0; a < game.num_joint_actions(); ++a)
      for (int i = 0; i < game.num_players(); ++i)
        marg[i][game.action_space().digit(a, i)] += pmf[a];
    for (std::int64_t a = 0; a < game.num_joint_actions(); ++a) {
      double prod = 1;
      for (int i = 0; i < game.num_players(); ++i)
        prod *= marg[i][game.action_space().digit(a, i)];
      const double v = std::abs(pmf[a] - prod);
      if (v > rep.worst_violation) {
        rep.worst_violation = v;
        rep.worst_constraint = "product form";
      }
    }
  }

  rep.satisfied = rep.worst_violation <= tol;
  return rep;
}

StaticOptResult optimize_static(const GameSpec& game, const FairnessFunction& phi, EqKind kind,
                                const FwOptions& opts) {
  if (kind == EqKind::NE)
    throw ValidationError("optimization over the Nash set is not supported (not a polytope)");
  if (phi.num_players() != game.num_players())
    throw ValidationError("fairness player count differs from the game's");

  const LinearSystem sys =
      kind == EqKind::CE ? build_ce_constraints(game) : build_cce_constraints(game);
  const auto ubar = average_tables(game);

  FwOptions o = opts;
  o.gap_tol = std::min(opts.gap_tol, 1e-8);
  const FwResult fw = maximize_concave(sys, phi, ubar, o);

  std::vector<double> p = fw.x;
  double sum = 0;
  for (double& v : p) {
    v = std::max(v, 0.0);
    sum += v;
  }
  for (double& v : p) v /= sum;

  StaticOptResult out;
  out.pmf = JointPmf::validated(game, std::move(p));
  out.utilities = expected_utilities(game, out.pmf);
  out.value = phi.value(out.utilities);
  out.gap = fw.gap;
  out.iterations = fw.iterations;
  return out;
}

std::vector<SilhouettePoint> polytope_silhouette(const GameSpec& game, EqKind kind,
                                                 int num_directions) {
  if (game.num_players() < 2)
    throw ValidationError("silhouette needs at least two players");
  if (num_directions < 3) throw ValidationError("need at least 3 directions");
  if (kind == EqKind::NE)
    throw ValidationError("silhouette over the Nash set is not supported");

  const LinearSystem sys =
      kind == EqKind::CE ? build_ce_constraints(game) : build_cce_constraints(game);
  const auto ubar = average_tables(game);
  const std::int64_t A = game.num_joint_actions();

  std::vector<SilhouettePoint> pts;
  pts.reserve(num_directions);
  for (int k = 0; k < num_directions; ++k) {
    const double ang = 2.0 * M_PI * k / num_directions;
    const double cx = std::cos(ang), cy = std::sin(ang);
    std::vector<double> cost(A);
    for (std::int64_t a = 0; a < A; ++a) cost[a] = cx * ubar[0][a] + cy * ubar[1][a];
    const LpSolution sol = lp_solve(sys, cost, LpSense::Maximize);
    if (sol.status != LpStatus::Optimal)
      throw InfeasibleError("equilibrium polytope is empty");
    double u1 = 0, u2 = 0;
    for (std::int64_t a = 0; a < A; ++a) {
      u1 += sol.x[a] * ubar[0][a];
      u2 += sol.x[a] * ubar[1][a];
    }
    pts.push_back({ang, u1, u2});
  }
  return pts;
}

std::vector<std::array<double, 2>> hull_vertices(std::vector<std::array<double, 2>> points,
                                                 double merge_tol, double collinear_tol) {
  // Merge near-duplicates first so ties do not create spurious hull pivots.
  std::sort(points.begin(), points.end());
  std::vector<std::array<double, 2>> uniq;
  for (const auto& p : points) {
    if (!uniq.empty() && std::abs(p[0] - uniq.back()[0]) <= merge_tol &&
        std::abs(p[1] - uniq.back()[1]) <= merge_tol)
      continue;
    uniq.push_back(p);
  }
  const std::size_t n = uniq.size();
  if (n <= 2) return uniq;

  auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                  const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };

  // Andrew's monotone chain; near-collinear middle points are dropped.
  std::vector<std::array<double, 2>> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], uniq[i]) <= collinear_tol) --k;
    hull[k++] = uniq[i];
  }
  for (std::size_t i = n - 1, lo = k + 1; i-- > 0;) {
    while (k >= lo && cross(hull[k - 2], hull[k - 1], uniq[i]) <= collinear_tol) --k;
    hull[k++] = uniq[i];
  }
  hull.resize(k - 1);

  // The chain never pops its own start point, so a mid-edge point that sorts
  // first (ties broken by rounding jitter) can survive.  A cyclic pass
  // removes any vertex collinear with its neighbours.
  bool changed = true;
  while (changed && hull.size() > 2) {
    changed = false;
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const auto& prev = hull[(i + hull.size() - 1) % hull.size()];
      const auto& next = hull[(i + 1) % hull.size()];
      if (cross(prev, hull[i], next) <= collinear_tol) {
        hull.erase(hull.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return hull;
}

}  // namespace fairgame
