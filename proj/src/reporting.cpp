#include "fairgame/reporting.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fairgame {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trace_to_csv(const Trace& trace, const GameSpec& game) {
  const int n = game.num_players();
  const bool general = trace.config.variant == EngineVariant::General;
  std::ostringstream out;

  out << "t";
  for (int k = 0; k <= n; ++k) out << ",w" << k;
  for (int i = 1; i <= n; ++i) out << ",a" << i;
  for (int i = 1; i <= n; ++i) out << ",gamma" << i;
  out << ",theta";
  for (int i = 1; i <= n; ++i) out << ",u" << i;
  for (int i = 1; i <= n; ++i) out << ",Z" << i;
  if (general) {
    for (int i = 1; i <= n; ++i) out << ",Q" << i;
    for (int i = 1; i <= n; ++i) out << ",Jsum" << i;
  } else {
    for (int i = 1; i <= n; ++i)
      for (int b = 0; b < game.num_actions(i - 1); ++b) out << ",Qd" << i << "_" << b;
  }
  out << ",Xnorm";
  for (int i = 1; i <= n; ++i) out << ",ubar" << i;
  out << ",gbar\n";

  for (const TraceRecord& rec : trace.records) {
    out << rec.t;
    for (int k = 0; k <= n; ++k) out << "," << game.event_space().digit(rec.event, k);
    for (int i = 0; i < n; ++i) out << "," << rec.decision.actions[i];
    for (int i = 0; i < n; ++i) out << "," << format_double(rec.decision.gamma[i]);
    out << ",";
    {
      bool first = true;
      for (int i = 0; i < n; ++i) {
        if (rec.decision.theta[i] == 0.0) continue;
        if (!first) out << ";";
        first = false;
        out << i + 1 << ":" << game.player_event(rec.event, i) << "="
            << format_double(rec.decision.theta[i]);
      }
    }
    for (int i = 0; i < n; ++i) out << "," << format_double(rec.decision.utilities[i]);
    for (int i = 0; i < n; ++i) out << "," << format_double(rec.queues.z[i]);
    if (general) {
      for (int i = 0; i < n; ++i) out << "," << format_double(rec.queues.q[i]);
      for (int i = 0; i < n; ++i) {
        double jsum = 0;
        for (double v : rec.queues.j[i]) jsum += v;
        out << "," << format_double(jsum);
      }
    } else {
      for (int i = 0; i < n; ++i)
        for (double v : rec.queues.q_dev[i]) out << "," << format_double(v);
    }
    out << "," << format_double(rec.queue_norm);
    for (int i = 0; i < n; ++i) out << "," << format_double(rec.u_avg[i]);
    out << "," << format_double(rec.g_avg) << "\n";
  }
  return out.str();
}

std::string silhouette_to_csv(const std::vector<SilhouettePoint>& points) {
  std::ostringstream out;
  out << "angle,dir_u1,dir_u2,u1,u2\n";
  for (const auto& p : points) {
    out << format_double(p.angle) << "," << format_double(std::cos(p.angle)) << ","
        << format_double(std::sin(p.angle)) << "," << format_double(p.u1) << ","
        << format_double(p.u2) << "\n";
  }
  return out.str();
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "V,phi_gamma_avg,norm_over_T,phi_star,utility_lower_bound,envelope_at_T\n";
  for (const auto& r : rows) {
    out << format_double(r.v) << "," << format_double(r.mean_phi_gamma_avg) << ","
        << format_double(r.mean_norm_over_t) << "," << format_double(r.phi_star) << ","
        << format_double(r.utility_lower_bound) << "," << format_double(r.envelope_at_t)
        << "\n";
  }
  return out.str();
}

}  // namespace fairgame
