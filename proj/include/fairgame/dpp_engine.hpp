#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fairgame/fairness.hpp"
#include "fairgame/game.hpp"

namespace fairgame {

enum class EngineVariant { General, Special };

// Online game-manager configuration. The special variant is the reduced
// engine for games whose player event alphabets are singletons; it keeps one
// deviation queue per (player, action) instead of the theta machinery.
struct EngineConfig {
  explicit EngineConfig(FairnessFunction fairness) : phi(std::move(fairness)) {}

  FairnessFunction phi;
  double V = 100;
  long long horizon = 0;
  std::uint64_t seed = 0;
  EngineVariant variant = EngineVariant::General;
  // 0 picks the default: every slot for horizons up to 1e5, else every 100th.
  long long snapshot_stride = 0;
};

struct QueueState {
  std::vector<double> z;                   // signed utility-promise queues
  std::vector<double> q;                   // general: threshold-payout queues
  std::vector<std::vector<double>> j;      // general: [i][v*|A_i|+b] deviation queues
  std::vector<std::vector<double>> q_dev;  // special: [i][b] deviation queues

  // ||X|| = sqrt(2 L) with L the quadratic Lyapunov function.
  double norm() const;
};

QueueState initial_queues(const GameSpec& game, EngineVariant variant);

struct SlotDecision {
  std::vector<double> gamma;
  std::vector<double> theta;  // theta_{i, omega_i(t)}; all other cells are 0
  std::vector<int> actions;
  std::vector<double> utilities;
  // [i][b]: utility player i would have realized by playing b against the
  // suggested profile; feeds the J (or special-variant Q) updates.
  std::vector<std::vector<double>> deviation_utilities;
  double g = 0;  // phi(gamma)
};

struct TraceRecord {
  long long t = 0;         // completed slots, 1-based
  std::int64_t event = 0;  // joint event index observed this slot
  SlotDecision decision;
  QueueState queues;  // state after this slot's update
  double queue_norm = 0;
  std::vector<double> u_avg, gamma_avg;  // prefix means over slots 1..t
  double g_avg = 0;
};

struct Trace {
  EngineConfig config;
  std::vector<TraceRecord> records;
  long long horizon = 0;
  // running means over the whole horizon
  std::vector<double> final_u_avg, final_gamma_avg;
  std::vector<std::vector<double>> final_theta_avg;  // [i][v]
  std::vector<std::vector<double>> final_dev_avg;    // [i][v*|A_i|+b]
  double final_g_avg = 0;
  double final_queue_norm = 0;
  QueueState final_queues;
  std::vector<double> joint_counts;  // (omega, alpha) visit counts, size W*A

  Trace(EngineConfig cfg) : config(std::move(cfg)) {}
};

// Per-slot subproblems. All tie-breaks are deterministic: gamma prefers the
// smaller value when indifferent, theta resolves its threshold tie to 0, and
// the action argmin takes the smallest joint-action index.

// argmax of V phi(gamma) - sum_i z_i gamma_i over the box [0, caps].
std::vector<double> choose_gamma(const FairnessFunction& phi, double V, std::span<const double> z,
                                 std::span<const double> caps);

// General engine threshold rule at the observed event: theta_i = cap_i iff
// Q_i < sum_b J_{i, omega_i}^(b), else 0.
std::vector<double> choose_theta(const GameSpec& game, const QueueState& state, std::int64_t w);

// Value the action argmin minimizes; exposed so audits can compare the chosen
// action against alternatives.
double action_objective(const GameSpec& game, const QueueState& state, std::int64_t w,
                        std::int64_t a, EngineVariant variant);

std::int64_t choose_actions(const GameSpec& game, const QueueState& state, std::int64_t w,
                            EngineVariant variant);

// Applies the queue recursions in place for the slot's decision.
void update_queues(const GameSpec& game, QueueState& state, std::int64_t w,
                   const SlotDecision& decision, EngineVariant variant);

// Runs the online manager for config.horizon slots. Deterministic given the
// seed; records every snapshot_stride-th slot plus the final one.
Trace run(const GameSpec& game, const EngineConfig& config);

struct BoundReport {
  double b_constant = 0;          // B = sum cap_i^2 + 1/2 sum |A_i| cap_i^2
  double g_max = 0;               // phi at the utility caps
  double phi_star = 0;            // offline optimum (or an estimate)
  bool phi_star_estimated = false;
  double v = 0;
  double utility_lower_bound = 0;  // phi_star - B/V
  double envelope_coefficient = 0; // sqrt(2B + 2V(g_max - phi_star))

  double envelope(double t) const;  // envelope_coefficient / sqrt(t)
};

// Closed-form performance/backlog bounds. phi_star defaults to the offline
// stochastic-CCE optimum for phi; pass a value (e.g. a best-observed running
// average when the offline solve is too large) to skip that solve.
BoundReport theorem_bounds(const GameSpec& game, const FairnessFunction& phi, double V,
                           std::optional<double> phi_star = std::nullopt,
                           bool phi_star_estimated = false);
BoundReport theorem_bounds(const GameSpec& game, const EngineConfig& config,
                           std::optional<double> phi_star = std::nullopt,
                           bool phi_star_estimated = false);

// Empirical Pr[alpha | omega] from the trace's joint visit counts; rows of
// events never observed stay zero.
ConditionalPolicy extract_empirical_policy(const Trace& trace, const GameSpec& game);

}  // namespace fairgame
