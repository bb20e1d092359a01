#pragma once

#include <string>
#include <vector>

#include "fairgame/dpp_engine.hpp"
#include "fairgame/game.hpp"
#include "fairgame/static_equilibrium.hpp"

namespace fairgame {

// All floating-point output uses 17 significant digits so every artifact
// round-trips losslessly and identical runs produce identical bytes.
std::string format_double(double x);

// Trace CSV. Fixed header, one row per recorded slot:
//   t, w0..wN, a1..aN, gamma1..N, theta, u1..uN, Z1..ZN,
//   general engine: Q1..QN, Jsum1..N (total J backlog per player)
//   special engine: Qd<i>_<action> per (player, action)
//   Xnorm, ubar1..N, gbar
// Events and actions are indices; theta is the sparse "i:v=value" list
// (';'-joined, empty when all thresholds are 0).
std::string trace_to_csv(const Trace& trace, const GameSpec& game);

std::string silhouette_to_csv(const std::vector<SilhouettePoint>& points);

// One sweep-v row per V value, seed-averaged.
struct SweepRow {
  double v = 0;
  double mean_phi_gamma_avg = 0;  // mean over seeds of phi(final gamma average)
  double mean_norm_over_t = 0;    // mean over seeds of ||X(T)||/T
  double phi_star = 0;
  double utility_lower_bound = 0;  // phi_star - B/V
  double envelope_at_t = 0;        // queue-norm envelope evaluated at T
};

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace fairgame
