#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairgame/dpp_engine.hpp"
#include "fairgame/errors.hpp"
#include "fairgame/game_file.hpp"
#include "fairgame/reporting.hpp"
#include "fairgame/static_equilibrium.hpp"
#include "fairgame/stochastic_game.hpp"

using nlohmann::ordered_json;
namespace fg = fairgame;
namespace fs = std::filesystem;

namespace {

// Doubles are serialized as strings at 17 significant digits so reports are
// byte-stable and lossless.
ordered_json jnum(double x) { return fg::format_double(x); }

ordered_json jvec(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(jnum(x));
  return a;
}

struct CommonArgs {
  std::string game_path;
  std::string out_dir;
  std::string fairness_expr;
};

void add_common(CLI::App* cmd, CommonArgs& c, bool with_fairness = true) {
  cmd->add_option("game", c.game_path, "game file")->required();
  const char* env_out = std::getenv("FAIRGAME_OUT");
  c.out_dir = env_out && *env_out ? env_out : "fairgame-out";
  cmd->add_option("--out", c.out_dir, "output directory (default $FAIRGAME_OUT or fairgame-out)");
  if (with_fairness)
    cmd->add_option("--fairness", c.fairness_expr,
                    "fairness expression, e.g. \"10*log(1+u1)+log(1+u2)\", \"u1+u2\" or "
                    "\"min(u1,u2,5)\"");
}

fg::FairnessFunction resolve_fairness(const CommonArgs& c, const fg::GameFileData& data) {
  if (!c.fairness_expr.empty())
    return fg::FairnessFunction::parse(c.fairness_expr, data.game.num_players());
  if (data.fairness) return *data.fairness;
  return fg::FairnessFunction::weighted_log(
      std::vector<double>(data.game.num_players(), 1.0));
}

std::string write_artifact(const std::string& out_dir, const std::string& file,
                           const std::string& content) {
  fs::create_directories(out_dir);
  const fs::path path = fs::path(out_dir) / file;
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return path.string();
}

ordered_json report_base(const std::string& command, const std::vector<std::string>& argv,
                         const CommonArgs& c) {
  ordered_json rep;
  rep["command"] = command;
  rep["argv"] = argv;
  rep["game"] = c.game_path;
  return rep;
}

void finish_report(ordered_json& rep, const CommonArgs& c) {
  const std::string path = write_artifact(c.out_dir, "report.json", rep.dump(2) + "\n");
  std::cout << "report: " << path << "\n";
}

ordered_json certification_json(const fg::CertificationReport& r) {
  ordered_json j;
  j["kind"] = fg::to_string(r.kind);
  j["satisfied"] = r.satisfied;
  j["worst_violation"] = jnum(r.worst_violation);
  j["worst_constraint"] = r.worst_constraint;
  j["utilities"] = jvec(r.utilities);
  j["tolerance"] = jnum(r.tolerance);
  return j;
}

ordered_json bounds_json(const fg::BoundReport& b) {
  ordered_json j;
  j["B"] = jnum(b.b_constant);
  j["g_max"] = jnum(b.g_max);
  j["phi_star"] = jnum(b.phi_star);
  j["phi_star_estimated"] = b.phi_star_estimated;
  j["V"] = jnum(b.v);
  j["utility_lower_bound"] = jnum(b.utility_lower_bound);
  j["envelope_coefficient"] = jnum(b.envelope_coefficient);
  return j;
}

ordered_json theta_json(const fg::ThetaAssignment& t) {
  ordered_json j;
  j["kind"] = fg::to_string(t.kind);
  ordered_json vals = ordered_json::array();
  for (const auto& row : t.values) vals.push_back(jvec(row));
  j["values"] = vals;
  return j;
}

ordered_json policy_json(const fg::GameSpec& game, const fg::ConditionalPolicy& policy) {
  ordered_json rows = ordered_json::array();
  for (std::int64_t w = 0; w < game.num_joint_events(); ++w) {
    ordered_json row = ordered_json::array();
    for (std::int64_t a = 0; a < game.num_joint_actions(); ++a)
      row.push_back(jnum(policy.prob(game, w, a)));
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> load_number_array(const std::string& path, const char* key) {
  std::ifstream in(path);
  if (!in) throw fg::ParseError("cannot open '" + path + "'");
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw fg::ParseError(path + ": " + e.what());
  }
  if (j.is_object() && j.contains(key)) j = j[key];
  std::vector<double> out;
  if (j.is_array() && !j.empty() && j[0].is_array()) {
    for (const auto& row : j)
      for (const auto& v : row) out.push_back(v.is_string()
                                                  ? std::strtod(v.get<std::string>().c_str(), nullptr)
                                                  : v.get<double>());
    return out;
  }
  if (!j.is_array()) throw fg::ParseError(path + ": expected a numeric array");
  for (const auto& v : j)
    out.push_back(v.is_string() ? std::strtod(v.get<std::string>().c_str(), nullptr)
                                : v.get<double>());
  return out;
}

// Bounded fan-out for independent engine runs.
void parallel_for(int jobs, const std::function<void(int)>& body) {
  const int workers =
      std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), jobs));
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int wk = 0; wk < workers; ++wk) {
    pool.emplace_back([&] {
      for (;;) {
        const int k = next.fetch_add(1);
        if (k >= jobs) return;
        body(k);
      }
    });
  }
  for (auto& th : pool) th.join();
}

ordered_json engine_config_json(const fg::EngineConfig& cfg) {
  ordered_json j;
  j["fairness"] = cfg.phi.to_string();
  j["V"] = jnum(cfg.V);
  j["T"] = cfg.horizon;
  j["seed"] = cfg.seed;
  j["engine"] = cfg.variant == fg::EngineVariant::General ? "general" : "special";
  j["snapshot_stride"] = cfg.snapshot_stride;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite stochastic games: equilibrium solvers and the online fairness manager"};
  app.require_subcommand(1);
  std::vector<std::string> argv_echo(argv, argv + argc);
  std::function<void()> action;

  // --- validate --------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("validate", "parse and validate a game file");
    auto c = std::make_shared<CommonArgs>();
    add_common(cmd, *c, false);
    cmd->callback([&action, c, &argv_echo] {
      action = [c, &argv_echo] {
        const fg::GameFileData data = fg::parse_game_file(c->game_path);
        const fg::GameSpec& g = data.game;
        ordered_json rep = report_base("validate", argv_echo, *c);
        ordered_json res;
        res["players"] = g.num_players();
        ordered_json acts = ordered_json::array();
        for (int i = 0; i < g.num_players(); ++i) acts.push_back(g.num_actions(i));
        res["actions_per_player"] = acts;
        ordered_json evs = ordered_json::array();
        for (int k = 0; k <= g.num_players(); ++k) evs.push_back(g.event_component_size(k));
        res["event_component_sizes"] = evs;
        res["joint_actions"] = g.num_joint_actions();
        res["joint_events"] = g.num_joint_events();
        std::int64_t support = 0;
        for (std::int64_t w = 0; w < g.num_joint_events(); ++w)
          if (g.event_prob(w) > 0) ++support;
        res["pmf_support"] = support;
        res["utility_caps"] = jvec(g.utility_caps());
        res["fairness"] = data.fairness ? data.fairness->to_string() : "";
        rep["results"] = res;
        finish_report(rep, *c);
        std::cout << "ok: " << g.num_players() << " players, " << g.num_joint_actions()
                  << " joint actions, " << g.num_joint_events() << " joint events\n";
      };
    });
  }

  // --- solve-static ----------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("solve-static",
                                   "maximize fairness over the static CE/CCE polytope");
    auto c = std::make_shared<CommonArgs>();
    auto kind = std::make_shared<std::string>("cce");
    add_common(cmd, *c);
    cmd->add_option("--kind", *kind, "equilibrium kind: ce or cce")
        ->check(CLI::IsMember({"ce", "cce"}));
    cmd->callback([&action, c, kind, &argv_echo] {
      action = [c, kind, &argv_echo] {
        const fg::GameFileData data = fg::parse_game_file(c->game_path);
        const fg::FairnessFunction phi = resolve_fairness(*c, data);
        const fg::EqKind k = fg::eq_kind_from_string(*kind);
        const fg::StaticOptResult sol = fg::optimize_static(data.game, phi, k);
        const fg::CertificationReport cert = fg::certify(data.game, sol.pmf, k, 1e-6);

        ordered_json rep = report_base("solve-static", argv_echo, *c);
        rep["config"] = {{"kind", *kind}, {"fairness", phi.to_string()}};
        ordered_json res;
        res["value"] = jnum(sol.value);
        res["utilities"] = jvec(sol.utilities);
        res["gap"] = jnum(sol.gap);
        res["iterations"] = sol.iterations;
        res["pmf"] = jvec(sol.pmf.probs());
        res["certification"] = certification_json(cert);
        rep["results"] = res;
        finish_report(rep, *c);
        std::cout << "value " << fg::format_double(sol.value) << ", utilities";
        for (double u : sol.utilities) std::cout << " " << fg::format_double(u);
        std::cout << "\n";
      };
    });
  }

  // --- solve-stochastic ------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "solve-stochastic", "maximize fairness over the stochastic CE/CCE policy set");
    auto c = std::make_shared<CommonArgs>();
    auto kind = std::make_shared<std::string>("cce");
    add_common(cmd, *c);
    cmd->add_option("--kind", *kind, "equilibrium kind: ce or cce")
        ->check(CLI::IsMember({"ce", "cce"}));
    cmd->callback([&action, c, kind, &argv_echo] {
      action = [c, kind, &argv_echo] {
        const fg::GameFileData data = fg::parse_game_file(c->game_path);
        const fg::FairnessFunction phi = resolve_fairness(*c, data);
        const fg::EqKind k = fg::eq_kind_from_string(*kind);
        const fg::StochasticOptResult sol = fg::optimize_stochastic(data.game, phi, k);
        const fg::CertificationReport cert =
            fg::certify_stochastic(data.game, sol.policy, k, 1e-6);

        ordered_json rep = report_base("solve-stochastic", argv_echo, *c);
        rep["config"] = {{"kind", *kind}, {"fairness", phi.to_string()}};
        ordered_json res;
        res["value"] = jnum(sol.value);
        res["utilities"] = jvec(sol.utilities);
        res["gap"] = jnum(sol.gap);
        res["iterations"] = sol.iterations;
        res["policy"] = policy_json(data.game, sol.policy);
        res["theta"] = theta_json(sol.theta);
        res["certification"] = certification_json(cert);
        rep["results"] = res;
        finish_report(rep, *c);
        std::cout << "value " << fg::format_double(sol.value) << ", utilities";
        for (double u : sol.utilities) std::cout << " " << fg::format_double(u);
        std::cout << "\n";
      };
    });
  }

  // --- certify ---------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "certify", "check a joint pmf (static) or conditional policy (stochastic)");
    auto c = std::make_shared<CommonArgs>();
    auto kind = std::make_shared<std::string>("cce");
    auto pmf_path = std::make_shared<std::string>();
    auto policy_path = std::make_shared<std::string>();
    auto tol = std::make_shared<double>(1e-9);
    add_common(cmd, *c, false);
    cmd->add_option("--kind", *kind, "equilibrium kind: ne, ce or cce")
        ->check(CLI::IsMember({"ne", "ce", "cce"}));
    cmd->add_option("--pmf", *pmf_path, "JSON file with a joint-action pmf (static check)");
    cmd->add_option("--policy", *policy_path,
                    "JSON file with conditional policy rows (stochastic check)");
    cmd->add_option("--tol", *tol, "certification tolerance (default 1e-9)");
    cmd->callback([&action, c, kind, pmf_path, policy_path, tol, &argv_echo] {
      action = [c, kind, pmf_path, policy_path, tol, &argv_echo] {
        const fg::GameFileData data = fg::parse_game_file(c->game_path);
        const fg::EqKind k = fg::eq_kind_from_string(*kind);
        if (pmf_path->empty() == policy_path->empty())
          throw fg::ValidationError("pass exactly one of --pmf or --policy");

        fg::CertificationReport cert;
        if (!pmf_path->empty()) {
          const fg::JointPmf pmf =
              fg::JointPmf::validated(data.game, load_number_array(*pmf_path, "pmf"), 1e-9);
          cert = fg::certify(data.game, pmf, k, *tol);
        } else {
          const fg::ConditionalPolicy policy = fg::ConditionalPolicy::validated(
              data.game, load_number_array(*policy_path, "policy"), 1e-9, true);
          cert = fg::certify_stochastic(data.game, policy, k, *tol);
        }

        ordered_json rep = report_base("certify", argv_echo, *c);
        rep["config"] = {{"kind", *kind},
                         {"tol", jnum(*tol)},
                         {"pmf", *pmf_path},
                         {"policy", *policy_path}};
        rep["results"] = {{"certification", certification_json(cert)}};
        finish_report(rep, *c);
        std::cout << (cert.satisfied ? "satisfied" : "violated") << ", worst violation "
                  << fg::format_double(cert.worst_violation) << " (" << cert.worst_constraint
                  << ")\n";
      };
    });
  }

  // --- silhouette ------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "silhouette", "probe the equilibrium polytope's (u1, u2) projection");
    auto c = std::make_shared<CommonArgs>();
    auto kind = std::make_shared<std::string>("cce");
    auto directions = std::make_shared<int>(64);
    add_common(cmd, *c, false);
    cmd->add_option("--kind", *kind, "equilibrium kind: ce or cce")
        ->check(CLI::IsMember({"ce", "cce"}));
    cmd->add_option("--directions", *directions, "number of probe directions (default 64)");
    cmd->callback([&action, c, kind, directions, &argv_echo] {
      action = [c, kind, directions, &argv_echo] {
        const fg::GameFileData data = fg::parse_game_file(c->game_path);
        const fg::EqKind k = fg::eq_kind_from_string(*kind);
        const auto pts = fg::polytope_silhouette(data.game, k, *directions);
        const std::string csv_path =
            write_artifact(c->out_dir, "silhouette.csv", fg::silhouette_to_csv(pts));

        std::vector<std::array<double, 2>> cloud;
        for (const auto& p : pts) cloud.push_back({p.u1, p.u2});
        const auto hull = fg::hull_vertices(cloud);

        ordered_json rep = report_base("silhouette", argv_echo, *c);
        rep["config"] = {{"kind", *kind}, {"directions", *directions}};
        ordered_json res;
        ordered_json hv = ordered_json::array();
        for (const auto& v : hull) hv.push_back(ordered_json::array({jnum(v[0]), jnum(v[1])}));
        res["hull_vertices"] = hv;
        rep["results"] = res;
        rep["outputs"] = {{"silhouette_csv", csv_path}};
        finish_report(rep, *c);
        std::cout << pts.size() << " directions, " << hull.size() << " hull vertices\n";
      };
    });
  }

  // --- run-dpp ---------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("run-dpp", "run the online drift-plus-penalty manager");
    auto c = std::make_shared<CommonArgs>();
    auto V = std::make_shared<double>(100.0);
    auto T = std::make_shared<long long>(100000);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto engine = std::make_shared<std::string>("general");
    auto stride = std::make_shared<long long>(0);
    add_common(cmd, *c);
    cmd->add_option("--V", *V, "drift-penalty weight (default 100)");
    cmd->add_option("--T", *T, "horizon in slots (default 100000)");
    cmd->add_option("--seed", *seed, "rng seed (default 0)");
    cmd->add_option("--engine", *engine, "engine variant (default general)")
        ->check(CLI::IsMember({"general", "special"}));
    cmd->add_option("--stride", *stride, "snapshot stride (0 = auto)");
    cmd->callback([&action, c, V, T, seed, engine, stride, &argv_echo] {
      action = [c, V, T, seed, engine, stride, &argv_echo] {
        const fg::GameFileData data = fg::parse_game_file(c->game_path);
        fg::EngineConfig cfg(resolve_fairness(*c, data));
        cfg.V = *V;
        cfg.horizon = *T;
        cfg.seed = *seed;
        cfg.variant =
            *engine == "special" ? fg::EngineVariant::Special : fg::EngineVariant::General;
        cfg.snapshot_stride = *stride;

        const fg::Trace trace = fg::run(data.game, cfg);
        fg::BoundReport bounds;
        bool estimated = false;
        try {
          bounds = fg::theorem_bounds(data.game, cfg);
        } catch (const fg::SizeCapError&) {
          estimated = true;
          bounds = fg::theorem_bounds(data.game, cfg, trace.final_g_avg, true);
        }
        (void)estimated;
        const std::string csv_path =
            write_artifact(c->out_dir, "trace.csv", fg::trace_to_csv(trace, data.game));

        ordered_json rep = report_base("run-dpp", argv_echo, *c);
        rep["config"] = engine_config_json(cfg);
        ordered_json res;
        res["bounds"] = bounds_json(bounds);
        res["final_u_avg"] = jvec(trace.final_u_avg);
        res["final_gamma_avg"] = jvec(trace.final_gamma_avg);
        res["phi_of_gamma_avg"] = jnum(cfg.phi.value(trace.final_gamma_avg));
        res["final_g_avg"] = jnum(trace.final_g_avg);
        res["final_queue_norm"] = jnum(trace.final_queue_norm);
        res["norm_over_T"] =
            jnum(*T > 0 ? trace.final_queue_norm / static_cast<double>(*T) : 0.0);
        res["recorded_slots"] = trace.records.size();
        rep["results"] = res;
        rep["outputs"] = {{"trace_csv", csv_path}};
        finish_report(rep, *c);
        std::cout << "phi(gamma_avg) " << fg::format_double(cfg.phi.value(trace.final_gamma_avg))
                  << " vs lower bound " << fg::format_double(bounds.utility_lower_bound) << "\n";
      };
    });
  }

  // --- sweep-v ---------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "sweep-v", "run-dpp across a V grid with multi-seed averaging");
    auto c = std::make_shared<CommonArgs>();
    auto grid = std::make_shared<std::vector<double>>();
    auto T = std::make_shared<long long>(100000);
    auto seeds = std::make_shared<int>(20);
    auto seed0 = std::make_shared<std::uint64_t>(0);
    auto engine = std::make_shared<std::string>("general");
    add_common(cmd, *c);
    cmd->add_option("--V", *grid, "V grid values (repeatable)")->expected(-1);
    cmd->add_option("--T", *T, "horizon in slots (default 100000)");
    cmd->add_option("--seeds", *seeds, "seeds per V (default 20)");
    cmd->add_option("--seed", *seed0, "first seed (default 0)");
    cmd->add_option("--engine", *engine, "engine variant (default general)")
        ->check(CLI::IsMember({"general", "special"}));
    cmd->callback([&action, c, grid, T, seeds, seed0, engine, &argv_echo] {
      action = [c, grid, T, seeds, seed0, engine, &argv_echo] {
        if (grid->empty()) *grid = {50, 100, 200};
        const fg::GameFileData data = fg::parse_game_file(c->game_path);
        const fg::FairnessFunction phi = resolve_fairness(*c, data);
        const double phi_star = fg::optimize_stochastic(data.game, phi, fg::EqKind::CCE).value;

        const int nv = static_cast<int>(grid->size());
        std::vector<double> sum_phi(nv, 0.0), sum_norm(nv, 0.0);
        std::vector<std::vector<double>> phis(nv, std::vector<double>(*seeds, 0.0));
        std::vector<std::vector<double>> norms(nv, std::vector<double>(*seeds, 0.0));
        parallel_for(nv * *seeds, [&](int job) {
          const int vi = job / *seeds, si = job % *seeds;
          fg::EngineConfig cfg(phi);
          cfg.V = (*grid)[vi];
          cfg.horizon = *T;
          cfg.seed = *seed0 + static_cast<std::uint64_t>(si);
          cfg.variant =
              *engine == "special" ? fg::EngineVariant::Special : fg::EngineVariant::General;
          cfg.snapshot_stride = std::max<long long>(*T, 1);  // finals only
          const fg::Trace tr = fg::run(data.game, cfg);
          phis[vi][si] = phi.value(tr.final_gamma_avg);
          norms[vi][si] = *T > 0 ? tr.final_queue_norm / static_cast<double>(*T) : 0.0;
        });
        for (int vi = 0; vi < nv; ++vi)
          for (int si = 0; si < *seeds; ++si) {
            sum_phi[vi] += phis[vi][si];
            sum_norm[vi] += norms[vi][si];
          }

        std::vector<fg::SweepRow> rows;
        for (int vi = 0; vi < nv; ++vi) {
          const fg::BoundReport b = fg::theorem_bounds(data.game, phi, (*grid)[vi], phi_star);
          fg::SweepRow row;
          row.v = (*grid)[vi];
          row.mean_phi_gamma_avg = sum_phi[vi] / *seeds;
          row.mean_norm_over_t = sum_norm[vi] / *seeds;
          row.phi_star = phi_star;
          row.utility_lower_bound = b.utility_lower_bound;
          row.envelope_at_t = b.envelope(static_cast<double>(*T));
          rows.push_back(row);
        }
        const std::string csv_path =
            write_artifact(c->out_dir, "sweep.csv", fg::sweep_to_csv(rows));

        ordered_json rep = report_base("sweep-v", argv_echo, *c);
        rep["config"] = {{"fairness", phi.to_string()},
                         {"T", *T},
                         {"seeds", *seeds},
                         {"seed0", *seed0},
                         {"engine", *engine}};
        ordered_json res = ordered_json::array();
        for (const auto& r : rows) {
          ordered_json jr;
          jr["V"] = jnum(r.v);
          jr["phi_gamma_avg"] = jnum(r.mean_phi_gamma_avg);
          jr["norm_over_T"] = jnum(r.mean_norm_over_t);
          jr["phi_star"] = jnum(r.phi_star);
          jr["utility_lower_bound"] = jnum(r.utility_lower_bound);
          jr["envelope_at_T"] = jnum(r.envelope_at_t);
          res.push_back(jr);
        }
        rep["results"] = res;
        rep["outputs"] = {{"sweep_csv", csv_path}};
        finish_report(rep, *c);
        for (const auto& r : rows)
          std::cout << "V=" << fg::format_double(r.v) << " phi(gamma_avg)="
                    << fg::format_double(r.mean_phi_gamma_avg)
                    << " bound=" << fg::format_double(r.utility_lower_bound) << "\n";
      };
    });
  }

  // --- extract-policy --------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "extract-policy", "run the manager and extract the empirical conditional policy");
    auto c = std::make_shared<CommonArgs>();
    auto V = std::make_shared<double>(200.0);
    auto T = std::make_shared<long long>(1000000);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto engine = std::make_shared<std::string>("general");
    add_common(cmd, *c);
    cmd->add_option("--V", *V, "drift-penalty weight (default 200)");
    cmd->add_option("--T", *T, "horizon in slots (default 1000000)");
    cmd->add_option("--seed", *seed, "rng seed (default 0)");
    cmd->add_option("--engine", *engine, "engine variant (default general)")
        ->check(CLI::IsMember({"general", "special"}));
    cmd->callback([&action, c, V, T, seed, engine, &argv_echo] {
      action = [c, V, T, seed, engine, &argv_echo] {
        const fg::GameFileData data = fg::parse_game_file(c->game_path);
        fg::EngineConfig cfg(resolve_fairness(*c, data));
        cfg.V = *V;
        cfg.horizon = *T;
        cfg.seed = *seed;
        cfg.variant =
            *engine == "special" ? fg::EngineVariant::Special : fg::EngineVariant::General;
        cfg.snapshot_stride = std::max<long long>(*T, 1);

        const fg::Trace trace = fg::run(data.game, cfg);
        const fg::ConditionalPolicy policy = fg::extract_empirical_policy(trace, data.game);
        const fg::CertificationReport cert =
            fg::certify_stochastic(data.game, policy, fg::EqKind::CCE, 1e-9);

        ordered_json pol;
        pol["policy"] = policy_json(data.game, policy);
        const std::string policy_path =
            write_artifact(c->out_dir, "policy.json", pol.dump(2) + "\n");

        ordered_json rep = report_base("extract-policy", argv_echo, *c);
        rep["config"] = engine_config_json(cfg);
        ordered_json res;
        res["certification"] = certification_json(cert);
        res["final_u_avg"] = jvec(trace.final_u_avg);
        rep["results"] = res;
        rep["outputs"] = {{"policy_json", policy_path}};
        finish_report(rep, *c);
        std::cout << "empirical policy worst CCE violation "
                  << fg::format_double(cert.worst_violation) << "\n";
      };
    });
  }

  try {
    app.parse(argc, argv);
    action();
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const fg::ParseError& e) {
    std::cerr << "error (parse): " << e.what() << "\n";
    return 2;
  } catch (const fg::ValidationError& e) {
    std::cerr << "error (validation): " << e.what() << "\n";
    return 3;
  } catch (const fg::InfeasibleError& e) {
    std::cerr << "error (infeasible): " << e.what() << "\n";
    return 4;
  } catch (const fg::SizeCapError& e) {
    std::cerr << "error (size-cap): " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
