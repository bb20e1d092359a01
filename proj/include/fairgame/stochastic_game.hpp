#pragma once

#include <cstdint>
#include <vector>

#include "fairgame/frank_wolfe.hpp"
#include "fairgame/game.hpp"
#include "fairgame/linear_system.hpp"
#include "fairgame/static_equilibrium.hpp"

namespace fairgame {

// --- virtual static game ----------------------------------------------------
// A pure strategy for player i maps each observable event value to an action.
// Strategies are indexed big-endian over (map[0], map[1], ...), base |A_i|.

std::int64_t num_pure_strategies(const GameSpec& game, int player);

// All pure strategies of a player as event->action tables, in index order.
// Throws SizeCapError above `cap` strategies.
std::vector<std::vector<int>> enumerate_pure_strategies(const GameSpec& game, int player,
                                                        int cap = 4096);

// Expected utilities h_i of a pure-strategy profile: h_i = E[u_i(b(omega))]
// with b(omega) the profile's action vector at the drawn event.
std::vector<double> virtual_utilities(const GameSpec& game,
                                      const std::vector<std::vector<int>>& profile);

// One-shot game whose action sets are the players' pure strategies and whose
// utilities are the h_i tables; its event alphabets are singletons, so every
// static notion applies to it directly.
struct VirtualStaticGame {
  GameSpec game;
  // maps[i][s][v]: action chosen by player i's strategy s at event value v
  std::vector<std::vector<std::vector<int>>> maps;
};

VirtualStaticGame build_virtual_static_game(const GameSpec& game, int cap = 4096);

// Conditional policy generated by a distribution over pure-strategy profiles:
// Pr[alpha | omega] = sum_s pmf[s] 1{profile s plays alpha at omega}. The
// result never depends on the manager's event component.
ConditionalPolicy policy_from_profile_pmf(const GameSpec& game, const VirtualStaticGame& vg,
                                          const JointPmf& profile_pmf);

// --- stochastic equilibrium constraint systems ------------------------------
// Variable layout shared by both builders: the first W*A variables are the
// policy entries Pr[alpha | omega], event-major. The tail block holds the
// per-player threshold variables.

inline std::int64_t stochastic_policy_var(const GameSpec& g, std::int64_t w, std::int64_t a) {
  return w * g.num_joint_actions() + a;
}
std::int64_t stochastic_theta_var(const GameSpec& g, int player, int v);          // CCE
std::int64_t stochastic_lambda_var(const GameSpec& g, int player, int v, int c);  // CE

// CCE system: row-sum equalities for every positive-probability event, one
// aggregate row per player
//   sum_v P[omega_i=v] theta_i(v) - E[u_i] <= 0
// and one deviation row per (player, observed v, deviation b)
//   E[u_i(b, alpha_-i) ; omega_i=v] - P[omega_i=v] theta_i(v) <= 0.
// theta_i(v) is box-bounded in [0, cap_i]; zero-mass cells are pinned to 0 and
// their deviation rows dropped.
LinearSystem build_stochastic_cce_constraints(const GameSpec& game);

// CE system in linearized form. The natural threshold variables
// theta_i(v, c) multiply the cell mass q_i(v, c) = Pr[omega_i=v, alpha_i=c],
// which is itself linear in the policy, so the system tracks
// lambda_i(v, c) = theta_i(v, c) * q_i(v, c) instead. Rows: aggregates
//   sum_{v,c} lambda_i(v,c) - E[u_i] <= 0,
// deviations per (player, v, c, b)
//   E[u_i(b, alpha_-i) ; omega_i=v, alpha_i=c] - lambda_i(v,c) <= 0,
// and cap rows lambda_i(v,c) - cap_i q_i(v,c) <= 0 encoding theta <= cap.
LinearSystem build_stochastic_ce_constraints(const GameSpec& game);

// Threshold values keyed per player: CCE values[i][v], CE
// values[i][v*|A_i|+c]. CE extraction divides lambda by the realized cell
// mass (0 where the cell has no mass) and clamps to [0, cap].
struct ThetaAssignment {
  EqKind kind = EqKind::CCE;
  std::vector<std::vector<double>> values;
};

ThetaAssignment theta_from_solution(const GameSpec& game, EqKind kind,
                                    std::span<const double> x);

// --- deviation oracle and certification -------------------------------------

std::vector<double> policy_expected_utilities(const GameSpec& game,
                                              const ConditionalPolicy& policy);

// Best deterministic deviation against a policy. For CCE the plan picks, for
// each observed v, the action maximizing the conditional deviation utility;
// for CE it picks per (v, suggested c). Ties break to the smallest action
// index. `value` is the plan's total expected utility, so the policy is
// feasible for the corresponding equilibrium iff value <= E[u_i] for all i.
struct DeviationPlan {
  int player = 0;
  EqKind kind = EqKind::CCE;
  std::vector<int> best_response;  // [v] for CCE, [v*|A_i|+c] for CE
  double value = 0;
};

DeviationPlan best_deviation(const GameSpec& game, const ConditionalPolicy& policy, int player,
                             EqKind kind);

// Feasibility check through the deviation oracle (and the conditional product
// form for NE).
CertificationReport certify_stochastic(const GameSpec& game, const ConditionalPolicy& policy,
                                       EqKind kind, double tol = 1e-9);

struct StochasticOptResult {
  ConditionalPolicy policy;
  ThetaAssignment theta;
  std::vector<double> utilities;
  double value = 0;
  double gap = 0;
  int iterations = 0;
};

// Maximizes the fairness objective over the stochastic CE or CCE set.
StochasticOptResult optimize_stochastic(const GameSpec& game, const FairnessFunction& phi,
                                        EqKind kind, const FwOptions& opts = {});

}  // namespace fairgame
