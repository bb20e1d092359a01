#include "fairgame/stochastic_game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairgame/errors.hpp"

namespace fairgame {

std::int64_t num_pure_strategies(const GameSpec& game, int player) {
  const int base = game.num_actions(player);
  const int digits = game.num_player_events(player);
  std::int64_t n = 1;
  for (int k = 0; k < digits; ++k) {
    if (n > (std::int64_t{1} << 62) / base)
      throw SizeCapError("pure strategy count overflows");
    n *= base;
  }
  return n;
}

std::vector<std::vector<int>> enumerate_pure_strategies(const GameSpec& game, int player,
                                                        int cap) {
  const std::int64_t n = num_pure_strategies(game, player);
  if (n > cap)
    throw SizeCapError("player " + std::to_string(player + 1) + " has " + std::to_string(n) +
                       " pure strategies, above the cap of " + std::to_string(cap));
  const int digits = game.num_player_events(player);
  MixedRadix radix(std::vector<int>(digits, game.num_actions(player)));
  std::vector<std::vector<int>> out;
  out.reserve(n);
  for (std::int64_t s = 0; s < n; ++s) out.push_back(radix.decode(s));
  return out;
}

std::vector<double> virtual_utilities(const GameSpec& game,
                                      const std::vector<std::vector<int>>& profile) {
  const int n = game.num_players();
  if (static_cast<int>(profile.size()) != n)
    throw ValidationError("profile needs one strategy per player");
  std::vector<double> h(n, 0.0);
  std::vector<int> act(n);
  for (std::int64_t w = 0; w < game.num_joint_events(); ++w) {
    const double p = game.event_prob(w);
    if (p == 0.0) continue;
    for (int i = 0; i < n; ++i) act[i] = profile[i][game.player_event(w, i)];
    const std::int64_t a = game.action_space().encode(act);
    for (int i = 0; i < n; ++i) h[i] += p * game.utility(i, a, w);
  }
  return h;
}

VirtualStaticGame build_virtual_static_game(const GameSpec& game, int cap) {
  const int n = game.num_players();
  VirtualStaticGame vg;
  vg.maps.resize(n);
  GameDef def;
  def.actions.resize(n);
  for (int i = 0; i < n; ++i) {
    vg.maps[i] = enumerate_pure_strategies(game, i, cap);
    def.actions[i].reserve(vg.maps[i].size());
    for (const auto& m : vg.maps[i]) {
      std::string label;
      for (std::size_t v = 0; v < m.size(); ++v) {
        if (v) label += "|";
        label += game.action_label(i, m[v]);
      }
      def.actions[i].push_back(label);
    }
  }
  def.events.assign(n + 1, {"-"});
  def.event_pmf = {1.0};

  MixedRadix srad = [&] {
    std::vector<int> sizes(n);
    for (int i = 0; i < n; ++i) sizes[i] = static_cast<int>(vg.maps[i].size());
    return MixedRadix(sizes);
  }();
  def.utilities.assign(n, std::vector<double>(srad.size(), 0.0));
  std::vector<std::vector<int>> profile(n);
  for (std::int64_t s = 0; s < srad.size(); ++s) {
    for (int i = 0; i < n; ++i) profile[i] = vg.maps[i][srad.digit(s, i)];
    const std::vector<double> h = virtual_utilities(game, profile);
    for (int i = 0; i < n; ++i) def.utilities[i][s] = h[i];
  }
  def.utility_caps = game.utility_caps();
  vg.game = GameSpec::validate(std::move(def));
  return vg;
}

ConditionalPolicy policy_from_profile_pmf(const GameSpec& game, const VirtualStaticGame& vg,
                                          const JointPmf& profile_pmf) {
  const std::int64_t A = game.num_joint_actions(), W = game.num_joint_events();
  const int n = game.num_players();
  std::vector<double> rows(W * A, 0.0);
  const std::int64_t S = vg.game.num_joint_actions();
  std::vector<int> act(n);
  for (std::int64_t s = 0; s < S; ++s) {
    const double p = profile_pmf[s];
    if (p == 0.0) continue;
    for (std::int64_t w = 0; w < W; ++w) {
      for (int i = 0; i < n; ++i)
        act[i] = vg.maps[i][vg.game.action_space().digit(s, i)][game.player_event(w, i)];
      rows[w * A + game.action_space().encode(act)] += p;
    }
  }
  return ConditionalPolicy::validated(game, std::move(rows), 1e-9);
}

// --- constraint builders -----------------------------------------------------

namespace {

std::int64_t theta_offset(const GameSpec& g, int player) {
  std::int64_t off = g.num_joint_events() * g.num_joint_actions();
  for (int i = 0; i < player; ++i) off += g.num_player_events(i);
  return off;
}

std::int64_t lambda_offset(const GameSpec& g, int player) {
  std::int64_t off = g.num_joint_events() * g.num_joint_actions();
  for (int i = 0; i < player; ++i)
    off += static_cast<std::int64_t>(g.num_player_events(i)) * g.num_actions(i);
  return off;
}

}  // namespace

std::int64_t stochastic_theta_var(const GameSpec& g, int player, int v) {
  return theta_offset(g, player) + v;
}

std::int64_t stochastic_lambda_var(const GameSpec& g, int player, int v, int c) {
  return lambda_offset(g, player) + static_cast<std::int64_t>(v) * g.num_actions(player) + c;
}

LinearSystem build_stochastic_cce_constraints(const GameSpec& game) {
  const std::int64_t A = game.num_joint_actions(), W = game.num_joint_events();
  const int n = game.num_players();
  std::int64_t nvars = W * A;
  for (int i = 0; i < n; ++i) nvars += game.num_player_events(i);
  LinearSystem sys(static_cast<int>(nvars));

  for (std::int64_t w = 0; w < W; ++w) {
    if (game.event_prob(w) > 0) {
      std::vector<double> row(nvars, 0.0);
      for (std::int64_t a = 0; a < A; ++a) row[w * A + a] = 1.0;
      sys.add_eq(std::move(row), 1.0);
    } else {
      for (std::int64_t a = 0; a < A; ++a) sys.upper[w * A + a] = 0.0;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < game.num_player_events(i); ++v) {
      const std::int64_t tv = stochastic_theta_var(game, i, v);
      sys.upper[tv] = game.player_event_marginal(i, v) > 0 ? game.utility_cap(i) : 0.0;
    }
  }

  for (int i = 0; i < n; ++i) {
    std::vector<double> row(nvars, 0.0);
    for (int v = 0; v < game.num_player_events(i); ++v)
      row[stochastic_theta_var(game, i, v)] = game.player_event_marginal(i, v);
    for (std::int64_t w = 0; w < W; ++w) {
      const double p = game.event_prob(w);
      if (p == 0.0) continue;
      for (std::int64_t a = 0; a < A; ++a) row[w * A + a] -= p * game.utility(i, a, w);
    }
    sys.add_ub(std::move(row), 0.0, "p" + std::to_string(i + 1) + " aggregate");
  }

  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < game.num_player_events(i); ++v) {
      const double pv = game.player_event_marginal(i, v);
      if (pv == 0.0) continue;
      for (int b = 0; b < game.num_actions(i); ++b) {
        std::vector<double> row(nvars, 0.0);
        for (std::int64_t w = 0; w < W; ++w) {
          if (game.player_event(w, i) != v) continue;
          const double p = game.event_prob(w);
          if (p == 0.0) continue;
          for (std::int64_t a = 0; a < A; ++a)
            row[w * A + a] = p * game.utility(i, game.with_action(a, i, b), w);
        }
        row[stochastic_theta_var(game, i, v)] = -pv;
        sys.add_ub(std::move(row), 0.0,
                   "p" + std::to_string(i + 1) + " v=" + game.event_label(i + 1, v) +
                       " dev=" + game.action_label(i, b));
      }
    }
  }
  return sys;
}

LinearSystem build_stochastic_ce_constraints(const GameSpec& game) {
  const std::int64_t A = game.num_joint_actions(), W = game.num_joint_events();
  const int n = game.num_players();
  std::int64_t nvars = W * A;
  for (int i = 0; i < n; ++i)
    nvars += static_cast<std::int64_t>(game.num_player_events(i)) * game.num_actions(i);
  LinearSystem sys(static_cast<int>(nvars));

  for (std::int64_t w = 0; w < W; ++w) {
    if (game.event_prob(w) > 0) {
      std::vector<double> row(nvars, 0.0);
      for (std::int64_t a = 0; a < A; ++a) row[w * A + a] = 1.0;
      sys.add_eq(std::move(row), 1.0);
    } else {
      for (std::int64_t a = 0; a < A; ++a) sys.upper[w * A + a] = 0.0;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int v = 0; v < game.num_player_events(i); ++v)
      if (game.player_event_marginal(i, v) == 0.0)
        for (int c = 0; c < game.num_actions(i); ++c)
          sys.upper[stochastic_lambda_var(game, i, v, c)] = 0.0;

  for (int i = 0; i < n; ++i) {
    std::vector<double> row(nvars, 0.0);
    for (int v = 0; v < game.num_player_events(i); ++v)
      for (int c = 0; c < game.num_actions(i); ++c)
        row[stochastic_lambda_var(game, i, v, c)] = 1.0;
    for (std::int64_t w = 0; w < W; ++w) {
      const double p = game.event_prob(w);
      if (p == 0.0) continue;
      for (std::int64_t a = 0; a < A; ++a) row[w * A + a] -= p * game.utility(i, a, w);
    }
    sys.add_ub(std::move(row), 0.0, "p" + std::to_string(i + 1) + " aggregate");
  }

  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < game.num_player_events(i); ++v) {
      if (game.player_event_marginal(i, v) == 0.0) continue;
      for (int c = 0; c < game.num_actions(i); ++c) {
        for (int b = 0; b < game.num_actions(i); ++b) {
          std::vector<double> row(nvars, 0.0);
          for (std::int64_t w = 0; w < W; ++w) {
            if (game.player_event(w, i) != v) continue;
            const double p = game.event_prob(w);
            if (p == 0.0) continue;
            for (std::int64_t a = 0; a < A; ++a) {
              if (game.action_space().digit(a, i) != c) continue;
              row[w * A + a] = p * game.utility(i, game.with_action(a, i, b), w);
            }
          }
          row[stochastic_lambda_var(game, i, v, c)] = -1.0;
          sys.add_ub(std::move(row), 0.0,
                     "p" + std::to_string(i + 1) + " v=" + game.event_label(i + 1, v) + " " +
                         game.action_label(i, c) + "->" + game.action_label(i, b));
        }
      }
    }
  }

  // theta <= cap, expressed on lambda through the cell mass.
  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < game.num_player_events(i); ++v) {
      if (game.player_event_marginal(i, v) == 0.0) continue;
      for (int c = 0; c < game.num_actions(i); ++c) {
        std::vector<double> row(nvars, 0.0);
        for (std::int64_t w = 0; w < W; ++w) {
          if (game.player_event(w, i) != v) continue;
          const double p = game.event_prob(w);
          if (p == 0.0) continue;
          for (std::int64_t a = 0; a < A; ++a) {
            if (game.action_space().digit(a, i) != c) continue;
            row[w * A + a] = -game.utility_cap(i) * p;
          }
        }
        row[stochastic_lambda_var(game, i, v, c)] = 1.0;
        sys.add_ub(std::move(row), 0.0,
                   "p" + std::to_string(i + 1) + " cap v=" + game.event_label(i + 1, v) +
                       " c=" + game.action_label(i, c));
      }
    }
  }
  return sys;
}

ThetaAssignment theta_from_solution(const GameSpec& game, EqKind kind,
                                    std::span<const double> x) {
  const int n = game.num_players();
  ThetaAssignment out;
  out.kind = kind;
  out.values.resize(n);
  if (kind == EqKind::CCE) {
    for (int i = 0; i < n; ++i) {
      out.values[i].resize(game.num_player_events(i));
      for (int v = 0; v < game.num_player_events(i); ++v)
        out.values[i][v] = x[stochastic_theta_var(game, i, v)];
    }
    return out;
  }
  if (kind != EqKind::CE) throw ValidationError("theta assignment exists for ce and cce only");
  const std::int64_t A = game.num_joint_actions(), W = game.num_joint_events();
  for (int i = 0; i < n; ++i) {
    out.values[i].assign(static_cast<std::size_t>(game.num_player_events(i)) *
                             game.num_actions(i),
                         0.0);
    for (int v = 0; v < game.num_player_events(i); ++v) {
      for (int c = 0; c < game.num_actions(i); ++c) {
        double q = 0;
        for (std::int64_t w = 0; w < W; ++w) {
          if (game.player_event(w, i) != v) continue;
          const double p = game.event_prob(w);
          if (p == 0.0) continue;
          for (std::int64_t a = 0; a < A; ++a) {
            if (game.action_space().digit(a, i) != c) continue;
            q += p * x[w * A + a];
          }
        }
        const double lam = x[stochastic_lambda_var(game, i, v, c)];
        double theta = q > 1e-15 ? lam / q : 0.0;
        theta = std::clamp(theta, 0.0, game.utility_cap(i));
        out.values[i][static_cast<std::size_t>(v) * game.num_actions(i) + c] = theta;
      }
    }
  }
  return out;
}

// --- deviation oracle and certification -------------------------------------

std::vector<double> policy_expected_utilities(const GameSpec& game,
                                              const ConditionalPolicy& policy) {
  const std::int64_t A = game.num_joint_actions(), W = game.num_joint_events();
  std::vector<double> u(game.num_players(), 0.0);
  for (std::int64_t w = 0; w < W; ++w) {
    const double p = game.event_prob(w);
    if (p == 0.0) continue;
    for (std::int64_t a = 0; a < A; ++a) {
      const double pr = policy.prob(game, w, a);
      if (pr == 0.0) continue;
      for (int i = 0; i < game.num_players(); ++i) u[i] += p * pr * game.utility(i, a, w);
    }
  }
  return u;
}

DeviationPlan best_deviation(const GameSpec& game, const ConditionalPolicy& policy, int player,
                             EqKind kind) {
  const std::int64_t A = game.num_joint_actions(), W = game.num_joint_events();
  const int nv = game.num_player_events(player);
  const int na = game.num_actions(player);
  DeviationPlan plan;
  plan.player = player;
  plan.kind = kind == EqKind::NE ? EqKind::CCE : kind;

  const bool per_cell = plan.kind == EqKind::CE;
  const int cells = per_cell ? nv * na : nv;
  // dev[cell][b]: expected utility of deviating to b on that cell.
  std::vector<std::vector<double>> dev(cells, std::vector<double>(na, 0.0));
  for (std::int64_t w = 0; w < W; ++w) {
    const double p = game.event_prob(w);
    if (p == 0.0) continue;
    const int v = game.player_event(w, player);
    for (std::int64_t a = 0; a < A; ++a) {
      const double pr = policy.prob(game, w, a);
      if (pr == 0.0) continue;
      const int cell = per_cell ? v * na + game.action_space().digit(a, player) : v;
      for (int b = 0; b < na; ++b)
        dev[cell][b] += p * pr * game.utility(player, game.with_action(a, player, b), w);
    }
  }
  plan.best_response.assign(cells, 0);
  plan.value = 0;
  for (int cell = 0; cell < cells; ++cell) {
    int best = 0;
    for (int b = 1; b < na; ++b)
      if (dev[cell][b] > dev[cell][best]) best = b;
    plan.best_response[cell] = best;
    plan.value += dev[cell][best];
  }
  return plan;
}

CertificationReport certify_stochastic(const GameSpec& game, const ConditionalPolicy& policy,
                                       EqKind kind, double tol) {
  CertificationReport rep;
  rep.kind = kind;
  rep.tolerance = tol;
  rep.utilities = policy_expected_utilities(game, policy);
  rep.worst_violation = -kInf;
  for (int i = 0; i < game.num_players(); ++i) {
    const DeviationPlan plan = best_deviation(game, policy, i, kind);
    const double v = plan.value - rep.utilities[i];
    if (v > rep.worst_violation) {
      rep.worst_violation = v;
      rep.worst_constraint = "p" + std::to_string(i + 1) + " best response";
    }
  }

  if (kind == EqKind::NE) {
    // Product form over conditionals: Pr[alpha|omega] must factor into
    // per-player q_i(alpha_i | omega_i), estimated as mass-weighted marginals.
    const std::int64_t A = game.num_joint_actions(), W = game.num_joint_events();
    const int n = game.num_players();
    std::vector<std::vector<double>> q(n);
    for (int i = 0; i < n; ++i) {
      q[i].assign(static_cast<std::size_t>(game.num_player_events(i)) * game.num_actions(i),
                  0.0);
      for (std::int64_t w = 0; w < W; ++w) {
        const double p = game.event_prob(w);
        if (p == 0.0) continue;
        const int v = game.player_event(w, i);
        for (std::int64_t a = 0; a < A; ++a)
          q[i][static_cast<std::size_t>(v) * game.num_actions(i) +
               game.action_space().digit(a, i)] += p * policy.prob(game, w, a);
      }
      for (int v = 0; v < game.num_player_events(i); ++v) {
        const double pv = game.player_event_marginal(i, v);
        if (pv == 0.0) continue;
        for (int c = 0; c < game.num_actions(i); ++c)
          q[i][static_cast<std::size_t>(v) * game.num_actions(i) + c] /= pv;
      }
    }
    for (std::int64_t w = 0; w < W; ++w) {
      if (game.event_prob(w) == 0.0) continue;
      for (std::int64_t a = 0; a < A; ++a) {
        double prod = 1;
        for (int i = 0; i < n; ++i)
          prod *= q[i][static_cast<std::size_t>(game.player_event(w, i)) *
                           game.num_actions(i) +
                       game.action_space().digit(a, i)];
        const double v = std::abs(policy.prob(game, w, a) - prod);
        if (v > rep.worst_violation) {
          rep.worst_violation = v;
          rep.worst_constraint = "product form";
        }
      }
    }
  }

  rep.satisfied = rep.worst_violation <= tol;
  return rep;
}

StochasticOptResult optimize_stochastic(const GameSpec& game, const FairnessFunction& phi,
                                        EqKind kind, const FwOptions& opts) {
  if (kind == EqKind::NE)
    throw ValidationError("optimization over the Nash set is not supported (not a polytope)");
  if (phi.num_players() != game.num_players())
    throw ValidationError("fairness player count differs from the game's");

  const LinearSystem sys = kind == EqKind::CE ? build_stochastic_ce_constraints(game)
                                              : build_stochastic_cce_constraints(game);
  const std::int64_t A = game.num_joint_actions(), W = game.num_joint_events();
  std::vector<std::vector<double>> umap(game.num_players(),
                                        std::vector<double>(sys.num_vars, 0.0));
  for (int i = 0; i < game.num_players(); ++i)
    for (std::int64_t w = 0; w < W; ++w) {
      const double p = game.event_prob(w);
      if (p == 0.0) continue;
      for (std::int64_t a = 0; a < A; ++a) umap[i][w * A + a] = p * game.utility(i, a, w);
    }

  FwOptions o = opts;
  o.gap_tol = std::min(opts.gap_tol, 1e-8);
  const FwResult fw = maximize_concave(sys, phi, umap, o);

  std::vector<double> rows(fw.x.begin(), fw.x.begin() + W * A);
  for (std::int64_t w = 0; w < W; ++w) {
    if (game.event_prob(w) == 0.0) continue;
    double sum = 0;
    for (std::int64_t a = 0; a < A; ++a) {
      double& p = rows[w * A + a];
      p = std::max(p, 0.0);
      sum += p;
    }
    for (std::int64_t a = 0; a < A; ++a) rows[w * A + a] /= sum;
  }

  StochasticOptResult out;
  out.policy = ConditionalPolicy::validated(game, std::move(rows));
  out.theta = theta_from_solution(game, kind, fw.x);
  out.utilities = policy_expected_utilities(game, out.policy);
  out.value = phi.value(out.utilities);
  out.gap = fw.gap;
  out.iterations = fw.iterations;
  return out;
}

}  // namespace fairgame
