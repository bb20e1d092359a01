#include "fairgame/dpp_engine.hpp"

#include <algorithm>
#include <cmath>

#include "fairgame/errors.hpp"
#include "fairgame/stochastic_game.hpp"

namespace fairgame {

double QueueState::norm() const {
  double s = 0;
  for (double v : z) s += v * v;
  for (double v : q) s += v * v;
  for (const auto& row : j)
    for (double v : row) s += v * v;
  for (const auto& row : q_dev)
    for (double v : row) s += v * v;
  return std::sqrt(s);
}

QueueState initial_queues(const GameSpec& game, EngineVariant variant) {
  const int n = game.num_players();
  QueueState st;
  st.z.assign(n, 0.0);
  if (variant == EngineVariant::General) {
    st.q.assign(n, 0.0);
    st.j.resize(n);
    for (int i = 0; i < n; ++i)
      st.j[i].assign(static_cast<std::size_t>(game.num_player_events(i)) * game.num_actions(i),
                     0.0);
  } else {
    st.q_dev.resize(n);
    for (int i = 0; i < n; ++i) st.q_dev[i].assign(game.num_actions(i), 0.0);
  }
  return st;
}

std::vector<double> choose_gamma(const FairnessFunction& phi, double V, std::span<const double> z,
                                 std::span<const double> caps) {
  const int n = phi.num_players();
  std::vector<double> gamma(n, 0.0);
  switch (phi.kind()) {
    case FairnessFunction::Kind::WeightedLog:
      for (int i = 0; i < n; ++i) {
        if (z[i] <= 0) {
          gamma[i] = caps[i];
        } else {
          gamma[i] = std::clamp(phi.weights()[i] * V / z[i] - 1.0, 0.0, caps[i]);
        }
      }
      return gamma;
    case FairnessFunction::Kind::Linear:
      // Bang-bang: the slot objective is linear per coordinate.
      for (int i = 0; i < n; ++i)
        gamma[i] = V * phi.weights()[i] - z[i] > 0 ? caps[i] : 0.0;
      return gamma;
    case FairnessFunction::Kind::MinWithCap: {
      // With m = min(gamma, cap), optimal coordinates are gamma_i = cap_i for
      // z_i < 0 and gamma_i = m otherwise, leaving a concave 1-d problem in m.
      double m_hi = phi.cap();
      for (int i = 0; i < n; ++i) m_hi = std::min(m_hi, caps[i]);
      double neg_gain = 0, pos_rate = 0;
      for (int i = 0; i < n; ++i) {
        if (z[i] < 0)
          neg_gain += -z[i] * caps[i];
        else
          pos_rate += z[i];
      }
      auto G = [&](double m) { return V * m - pos_rate * m + neg_gain; };
      const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
      double a = 0, b = m_hi;
      double c1 = b - invphi * (b - a), c2 = a + invphi * (b - a);
      double f1 = G(c1), f2 = G(c2);
      while (b - a > 1e-10) {
        if (f1 < f2) {
          a = c1;
          c1 = c2;
          f1 = f2;
          c2 = a + invphi * (b - a);
          f2 = G(c2);
        } else {
          b = c2;
          c2 = c1;
          f2 = f1;
          c1 = b - invphi * (b - a);
          f1 = G(c1);
        }
      }
      double m = 0;
      if (G(m_hi) > G(0)) m = m_hi;
      if (G((a + b) / 2) > G(m)) m = (a + b) / 2;
      for (int i = 0; i < n; ++i) gamma[i] = z[i] < 0 ? caps[i] : m;
      return gamma;
    }
  }
  return gamma;
}

std::vector<double> choose_theta(const GameSpec& game, const QueueState& state, std::int64_t w) {
  const int n = game.num_players();
  std::vector<double> theta(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const int v = game.player_event(w, i);
    double jsum = 0;
    const int na = game.num_actions(i);
    for (int b = 0; b < na; ++b) jsum += state.j[i][static_cast<std::size_t>(v) * na + b];
    if (state.q[i] < jsum) theta[i] = game.utility_cap(i);
  }
  return theta;
}

double action_objective(const GameSpec& game, const QueueState& state, std::int64_t w,
                        std::int64_t a, EngineVariant variant) {
  const int n = game.num_players();
  double obj = 0;
  if (variant == EngineVariant::General) {
    for (int i = 0; i < n; ++i) {
      obj -= (state.z[i] + state.q[i]) * game.utility(i, a, w);
      const int v = game.player_event(w, i);
      const int na = game.num_actions(i);
      for (int b = 0; b < na; ++b)
        obj += state.j[i][static_cast<std::size_t>(v) * na + b] *
               game.utility(i, game.with_action(a, i, b), w);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      double qsum = 0;
      const int na = game.num_actions(i);
      for (int b = 0; b < na; ++b) qsum += state.q_dev[i][b];
      obj -= (state.z[i] + qsum) * game.utility(i, a, w);
      for (int b = 0; b < na; ++b)
        obj += state.q_dev[i][b] * game.utility(i, game.with_action(a, i, b), w);
    }
  }
  return obj;
}

std::int64_t choose_actions(const GameSpec& game, const QueueState& state, std::int64_t w,
                            EngineVariant variant) {
  std::int64_t best = 0;
  double best_val = action_objective(game, state, w, 0, variant);
  for (std::int64_t a = 1; a < game.num_joint_actions(); ++a) {
    const double val = action_objective(game, state, w, a, variant);
    if (val < best_val) {
      best_val = val;
      best = a;
    }
  }
  return best;
}

void update_queues(const GameSpec& game, QueueState& state, std::int64_t w,
                   const SlotDecision& decision, EngineVariant variant) {
  const int n = game.num_players();
  for (int i = 0; i < n; ++i) {
    state.z[i] += decision.gamma[i] - decision.utilities[i];
    const int na = game.num_actions(i);
    if (variant == EngineVariant::General) {
      state.q[i] = std::max(state.q[i] + decision.theta[i] - decision.utilities[i], 0.0);
      const int v = game.player_event(w, i);
      for (int b = 0; b < na; ++b) {
        double& jq = state.j[i][static_cast<std::size_t>(v) * na + b];
        jq = std::max(jq + decision.deviation_utilities[i][b] - decision.theta[i], 0.0);
      }
    } else {
      for (int b = 0; b < na; ++b) {
        double& qd = state.q_dev[i][b];
        qd = std::max(qd + decision.deviation_utilities[i][b] - decision.utilities[i], 0.0);
      }
    }
  }
}

Trace run(const GameSpec& game, const EngineConfig& config) {
  const int n = game.num_players();
  if (config.phi.num_players() != n)
    throw ValidationError("fairness player count differs from the game's");
  if (config.V < 0) throw ValidationError("V must be nonnegative");
  if (config.horizon < 0) throw ValidationError("horizon must be nonnegative");
  if (config.variant == EngineVariant::Special) {
    for (int i = 0; i < n; ++i)
      if (game.num_player_events(i) != 1)
        throw ValidationError(
            "special engine requires singleton event alphabets for every player");
  }
  const long long stride = config.snapshot_stride > 0
                               ? config.snapshot_stride
                               : (config.horizon <= 100000 ? 1 : 100);

  Trace trace(config);
  trace.horizon = config.horizon;
  trace.final_u_avg.assign(n, 0.0);
  trace.final_gamma_avg.assign(n, 0.0);
  trace.final_theta_avg.resize(n);
  trace.final_dev_avg.resize(n);
  for (int i = 0; i < n; ++i) {
    trace.final_theta_avg[i].assign(game.num_player_events(i), 0.0);
    trace.final_dev_avg[i].assign(
        static_cast<std::size_t>(game.num_player_events(i)) * game.num_actions(i), 0.0);
  }
  trace.joint_counts.assign(game.num_joint_events() * game.num_joint_actions(), 0.0);

  QueueState state = initial_queues(game, config.variant);
  trace.final_queues = state;
  if (config.horizon == 0) return trace;

  SplitMix64 rng(config.seed);
  std::vector<double> u_sum(n, 0.0), gamma_sum(n, 0.0);
  double g_sum = 0;
  auto theta_sum = trace.final_theta_avg;  // zeros, right shape
  auto dev_sum = trace.final_dev_avg;

  SlotDecision d;
  d.theta.assign(n, 0.0);
  d.actions.assign(n, 0);
  d.utilities.assign(n, 0.0);
  d.deviation_utilities.resize(n);
  for (int i = 0; i < n; ++i) d.deviation_utilities[i].assign(game.num_actions(i), 0.0);

  for (long long t = 1; t <= config.horizon; ++t) {
    const std::int64_t w = game.sample_event(rng);

    d.gamma = choose_gamma(config.phi, config.V, state.z, game.utility_caps());
    if (config.variant == EngineVariant::General)
      d.theta = choose_theta(game, state, w);
    const std::int64_t a = choose_actions(game, state, w, config.variant);
    for (int i = 0; i < n; ++i) {
      d.actions[i] = game.action_space().digit(a, i);
      d.utilities[i] = game.utility(i, a, w);
      for (int b = 0; b < game.num_actions(i); ++b)
        d.deviation_utilities[i][b] = game.utility(i, game.with_action(a, i, b), w);
    }
    d.g = config.phi.value(d.gamma);

    for (int i = 0; i < n; ++i) {
      u_sum[i] += d.utilities[i];
      gamma_sum[i] += d.gamma[i];
      const int v = game.player_event(w, i);
      theta_sum[i][v] += d.theta[i];
      const int na = game.num_actions(i);
      for (int b = 0; b < na; ++b)
        dev_sum[i][static_cast<std::size_t>(v) * na + b] += d.deviation_utilities[i][b];
    }
    g_sum += d.g;
    trace.joint_counts[w * game.num_joint_actions() + a] += 1.0;

    update_queues(game, state, w, d, config.variant);

    if (t % stride == 0 || t == config.horizon) {
      TraceRecord rec;
      rec.t = t;
      rec.event = w;
      rec.decision = d;
      rec.queues = state;
      rec.queue_norm = state.norm();
      rec.u_avg.resize(n);
      rec.gamma_avg.resize(n);
      for (int i = 0; i < n; ++i) {
        rec.u_avg[i] = u_sum[i] / t;
        rec.gamma_avg[i] = gamma_sum[i] / t;
      }
      rec.g_avg = g_sum / t;
      trace.records.push_back(std::move(rec));
    }
  }

  const double T = static_cast<double>(config.horizon);
  for (int i = 0; i < n; ++i) {
    trace.final_u_avg[i] = u_sum[i] / T;
    trace.final_gamma_avg[i] = gamma_sum[i] / T;
    for (auto& v : theta_sum[i]) v /= T;
    for (auto& v : dev_sum[i]) v /= T;
  }
  trace.final_theta_avg = std::move(theta_sum);
  trace.final_dev_avg = std::move(dev_sum);
  trace.final_g_avg = g_sum / T;
  trace.final_queues = state;
  trace.final_queue_norm = state.norm();
  return trace;
}

double BoundReport::envelope(double t) const {
  return t > 0 ? envelope_coefficient / std::sqrt(t) : kInf;
}

BoundReport theorem_bounds(const GameSpec& game, const FairnessFunction& phi, double V,
                           std::optional<double> phi_star, bool phi_star_estimated) {
  BoundReport rep;
  rep.v = V;
  for (int i = 0; i < game.num_players(); ++i) {
    const double c2 = game.utility_cap(i) * game.utility_cap(i);
    rep.b_constant += c2 + 0.5 * game.num_actions(i) * c2;
  }
  rep.g_max = phi.max_over_box(game.utility_caps());
  if (phi_star) {
    rep.phi_star = *phi_star;
    rep.phi_star_estimated = phi_star_estimated;
  } else {
    rep.phi_star = optimize_stochastic(game, phi, EqKind::CCE).value;
    rep.phi_star_estimated = false;
  }
  rep.utility_lower_bound = V > 0 ? rep.phi_star - rep.b_constant / V : -kInf;
  rep.envelope_coefficient =
      std::sqrt(std::max(2 * rep.b_constant + 2 * V * (rep.g_max - rep.phi_star), 0.0));
  return rep;
}

BoundReport theorem_bounds(const GameSpec& game, const EngineConfig& config,
                           std::optional<double> phi_star, bool phi_star_estimated) {
  return theorem_bounds(game, config.phi, config.V, phi_star, phi_star_estimated);
}

ConditionalPolicy extract_empirical_policy(const Trace& trace, const GameSpec& game) {
  if (trace.horizon == 0 || trace.joint_counts.empty())
    throw ValidationError("cannot extract a policy from an empty trace");
  const std::int64_t A = game.num_joint_actions(), W = game.num_joint_events();
  std::vector<double> rows(trace.joint_counts.begin(), trace.joint_counts.end());
  for (std::int64_t w = 0; w < W; ++w) {
    double sum = 0;
    for (std::int64_t a = 0; a < A; ++a) sum += rows[w * A + a];
    if (sum > 0)
      for (std::int64_t a = 0; a < A; ++a) rows[w * A + a] /= sum;
  }
  return ConditionalPolicy::validated(game, std::move(rows), 1e-9, true);
}

}  // namespace fairgame
