#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>

#include "fairgame/dpp_engine.hpp"
#include "fairgame/errors.hpp"
#include "fairgame/fairness.hpp"
#include "fairgame/game.hpp"
#include "fairgame/game_file.hpp"
#include "fairgame/static_equilibrium.hpp"
#include "fairgame/stochastic_game.hpp"

namespace py = pybind11;
namespace fg = fairgame;

namespace {

fg::EqKind kind_of(const std::string& s) { return fg::eq_kind_from_string(s); }

std::vector<double> flatten_rows(const fg::GameSpec& game,
                                 const std::vector<std::vector<double>>& rows) {
  const auto W = static_cast<std::size_t>(game.num_joint_events());
  const auto A = static_cast<std::size_t>(game.num_joint_actions());
  if (rows.size() != W) throw fg::ValidationError("policy must have one row per joint event");
  std::vector<double> flat;
  flat.reserve(W * A);
  for (const auto& row : rows) {
    if (row.size() != A) throw fg::ValidationError("policy row length must equal the joint action count");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return flat;
}

std::vector<std::vector<double>> nest_rows(const fg::GameSpec& game,
                                           const std::vector<double>& flat) {
  const auto A = static_cast<std::size_t>(game.num_joint_actions());
  std::vector<std::vector<double>> rows;
  for (std::size_t off = 0; off < flat.size(); off += A)
    rows.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(off),
                      flat.begin() + static_cast<std::ptrdiff_t>(off + A));
  return rows;
}

py::dict certification_dict(const fg::CertificationReport& rep) {
  py::dict d;
  d["kind"] = fg::to_string(rep.kind);
  d["satisfied"] = rep.satisfied;
  d["worst_violation"] = rep.worst_violation;
  d["worst_constraint"] = rep.worst_constraint;
  d["utilities"] = rep.utilities;
  d["tolerance"] = rep.tolerance;
  return d;
}

py::dict bounds_dict(const fg::BoundReport& b) {
  py::dict d;
  d["B"] = b.b_constant;
  d["g_max"] = b.g_max;
  d["phi_star"] = b.phi_star;
  d["phi_star_estimated"] = b.phi_star_estimated;
  d["V"] = b.v;
  d["utility_lower_bound"] = b.utility_lower_bound;
  d["envelope_coefficient"] = b.envelope_coefficient;
  return d;
}

fg::EngineConfig make_config(const fg::FairnessFunction& phi, double V, long long T,
                             std::uint64_t seed, const std::string& engine,
                             long long stride) {
  fg::EngineConfig cfg(phi);
  cfg.V = V;
  cfg.horizon = T;
  cfg.seed = seed;
  if (engine == "special")
    cfg.variant = fg::EngineVariant::Special;
  else if (engine == "general")
    cfg.variant = fg::EngineVariant::General;
  else
    throw fg::ValidationError("engine must be 'general' or 'special'");
  cfg.snapshot_stride = stride;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(pyfairgame, m) {
  m.doc() = "repeated-game equilibrium solver and online game manager";

  py::register_exception<fg::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<fg::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<fg::InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
  py::register_exception<fg::SizeCapError>(m, "SizeCapError", PyExc_RuntimeError);
  py::register_exception<fg::NumericalBreakdown>(m, "NumericalBreakdown", PyExc_RuntimeError);

  py::class_<fg::FairnessFunction>(m, "Fairness")
      .def_static("parse", &fg::FairnessFunction::parse, py::arg("text"), py::arg("num_players"))
      .def_static("weighted_log", &fg::FairnessFunction::weighted_log, py::arg("weights"))
      .def_static("linear", &fg::FairnessFunction::linear, py::arg("weights"))
      .def_static("min_with_cap", &fg::FairnessFunction::min_with_cap, py::arg("num_players"),
                  py::arg("cap"))
      .def("value", &fg::FairnessFunction::value, py::arg("u"))
      .def("supergradient", &fg::FairnessFunction::supergradient, py::arg("u"))
      .def("__str__", &fg::FairnessFunction::to_string)
      .def("__eq__", [](const fg::FairnessFunction& a, const fg::FairnessFunction& b) {
        return a == b;
      });

  py::class_<fg::GameSpec>(m, "Game")
      .def_static(
          "from_text",
          [](const std::string& text) { return fg::parse_game_text(text, "<string>").game; },
          py::arg("text"))
      .def_property_readonly("num_players", &fg::GameSpec::num_players)
      .def_property_readonly("num_joint_actions", &fg::GameSpec::num_joint_actions)
      .def_property_readonly("num_joint_events", &fg::GameSpec::num_joint_events)
      .def_property_readonly("caps", &fg::GameSpec::utility_caps)
      .def("action_labels",
           [](const fg::GameSpec& g, int i) { return g.def().actions.at(static_cast<std::size_t>(i)); })
      .def("event_labels",
           [](const fg::GameSpec& g, int k) { return g.def().events.at(static_cast<std::size_t>(k)); })
      .def("utility",
           [](const fg::GameSpec& g, int player, long long a, long long w) {
             return g.utility(player, a, w);
           },
           py::arg("player"), py::arg("joint_action"), py::arg("joint_event"))
      .def("to_text",
           [](const fg::GameSpec& g) {
             fg::GameFileData data;
             data.game = g;
             return fg::serialize_game_file(data);
           })
      .def("__eq__", [](const fg::GameSpec& a, const fg::GameSpec& b) { return a == b; });

  m.def(
      "load_game",
      [](const std::string& path) {
        fg::GameFileData data = fg::parse_game_file(path);
        py::object phi = data.fairness ? py::cast(*data.fairness) : py::none();
        return py::make_tuple(data.game, phi);
      },
      py::arg("path"), "parse a game file; returns (game, fairness-or-None)");

  m.def(
      "average_utilities",
      [](const fg::GameSpec& game, const std::vector<double>& pmf) {
        return fg::expected_utilities(game, fg::JointPmf::validated(game, pmf));
      },
      py::arg("game"), py::arg("pmf"));

  m.def(
      "certify",
      [](const fg::GameSpec& game, const std::vector<double>& pmf, const std::string& kind,
         double tol) {
        return certification_dict(
            fg::certify(game, fg::JointPmf::validated(game, pmf), kind_of(kind), tol));
      },
      py::arg("game"), py::arg("pmf"), py::arg("kind") = "cce", py::arg("tol") = 1e-9);

  m.def(
      "optimize_static",
      [](const fg::GameSpec& game, const fg::FairnessFunction& phi, const std::string& kind,
         double gap_tol, int max_iters) {
        fg::FwOptions opts;
        opts.gap_tol = gap_tol;
        opts.max_iters = max_iters;
        fg::StaticOptResult r = fg::optimize_static(game, phi, kind_of(kind), opts);
        py::dict d;
        d["value"] = r.value;
        d["utilities"] = r.utilities;
        d["pmf"] = r.pmf.probs();
        d["gap"] = r.gap;
        d["iterations"] = r.iterations;
        return d;
      },
      py::arg("game"), py::arg("fairness"), py::arg("kind") = "cce", py::arg("gap_tol") = 1e-6,
      py::arg("max_iters") = 10000);

  m.def(
      "silhouette",
      [](const fg::GameSpec& game, int directions, const std::string& kind) {
        std::vector<fg::SilhouettePoint> pts = fg::polytope_silhouette(game, kind_of(kind), directions);
        py::list out;
        for (const auto& p : pts) {
          py::dict d;
          d["angle"] = p.angle;
          d["utilities"] = std::array<double, 2>{p.u1, p.u2};
          out.append(d);
        }
        return out;
      },
      py::arg("game"), py::arg("directions") = 64, py::arg("kind") = "cce");

  m.def("hull_vertices", &fg::hull_vertices, py::arg("points"), py::arg("merge_tol") = 1e-7,
        py::arg("collinear_tol") = 1e-6);

  m.def(
      "certify_policy",
      [](const fg::GameSpec& game, const std::vector<std::vector<double>>& rows,
         const std::string& kind, double tol) {
        auto policy = fg::ConditionalPolicy::validated(game, flatten_rows(game, rows), 1e-9, true);
        return certification_dict(fg::certify_stochastic(game, policy, kind_of(kind), tol));
      },
      py::arg("game"), py::arg("rows"), py::arg("kind") = "cce", py::arg("tol") = 1e-9);

  m.def(
      "best_deviation",
      [](const fg::GameSpec& game, const std::vector<std::vector<double>>& rows, int player,
         const std::string& kind) {
        auto policy = fg::ConditionalPolicy::validated(game, flatten_rows(game, rows), 1e-9, true);
        fg::DeviationPlan plan = fg::best_deviation(game, policy, player, kind_of(kind));
        py::dict d;
        d["player"] = plan.player;
        d["value"] = plan.value;
        d["best_response"] = plan.best_response;
        return d;
      },
      py::arg("game"), py::arg("rows"), py::arg("player"), py::arg("kind") = "cce");

  m.def(
      "optimize_stochastic",
      [](const fg::GameSpec& game, const fg::FairnessFunction& phi, const std::string& kind,
         double gap_tol, int max_iters) {
        fg::FwOptions opts;
        opts.gap_tol = gap_tol;
        opts.max_iters = max_iters;
        fg::StochasticOptResult r = fg::optimize_stochastic(game, phi, kind_of(kind), opts);
        py::dict d;
        d["value"] = r.value;
        d["utilities"] = r.utilities;
        d["policy"] = nest_rows(game, r.policy.rows());
        d["theta"] = r.theta.values;
        d["gap"] = r.gap;
        d["iterations"] = r.iterations;
        return d;
      },
      py::arg("game"), py::arg("fairness"), py::arg("kind") = "cce", py::arg("gap_tol") = 1e-6,
      py::arg("max_iters") = 10000);

  m.def(
      "run_dpp",
      [](const fg::GameSpec& game, const fg::FairnessFunction& phi, double V, long long T,
         std::uint64_t seed, const std::string& engine, long long stride, bool extract_policy) {
        fg::EngineConfig cfg = make_config(phi, V, T, seed, engine, stride);
        fg::Trace trace = fg::run(game, cfg);
        py::dict d;
        d["final_u_avg"] = trace.final_u_avg;
        d["final_gamma_avg"] = trace.final_gamma_avg;
        d["final_g_avg"] = trace.final_g_avg;
        d["phi_of_gamma_avg"] = phi.value(trace.final_gamma_avg);
        d["final_queue_norm"] = trace.final_queue_norm;
        d["recorded_slots"] = trace.records.size();
        if (extract_policy)
          d["policy"] = nest_rows(game, fg::extract_empirical_policy(trace, game).rows());
        return d;
      },
      py::arg("game"), py::arg("fairness"), py::arg("V") = 100.0, py::arg("T") = 100000,
      py::arg("seed") = 0, py::arg("engine") = "general", py::arg("stride") = 0,
      py::arg("extract_policy") = false);

  m.def(
      "theorem_bounds",
      [](const fg::GameSpec& game, const fg::FairnessFunction& phi, double V) {
        return bounds_dict(fg::theorem_bounds(game, phi, V));
      },
      py::arg("game"), py::arg("fairness"), py::arg("V"));
}
