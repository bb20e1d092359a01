#pragma once

#include <array>
#include <string>
#include <vector>

#include "fairgame/frank_wolfe.hpp"
#include "fairgame/game.hpp"
#include "fairgame/linear_system.hpp"

namespace fairgame {

enum class EqKind { NE, CE, CCE };

const char* to_string(EqKind kind);
EqKind eq_kind_from_string(const std::string& s);

// Event-averaged utility of a joint action: ubar_i(a) = sum_w pi[w] u_i(a, w).
// For games with singleton event alphabets this is just the utility table.
double average_utility(const GameSpec& game, int player, std::int64_t a);

// Expected utilities of a static correlated device, u_i = sum_a p[a] ubar_i(a).
std::vector<double> expected_utilities(const GameSpec& game, const JointPmf& pmf);

// Coarse correlated equilibrium constraints over joint-action pmfs.
// Variables: p[a] ordered by joint-action index, bounds [0, inf), one
// equality sum_a p[a] = 1, and one <= row per (player, deviation) in
// lexicographic order: sum_a p[a] (ubar_i(b, a_-i) - ubar_i(a)) <= 0.
LinearSystem build_cce_constraints(const GameSpec& game);

// Correlated equilibrium constraints; rows ordered (player, suggested av,
// deviation b != av): sum_{a: a_i=av} p[a] (ubar_i(b, a_-i) - ubar_i(a)) <= 0.
LinearSystem build_ce_constraints(const GameSpec& game);

struct CertificationReport {
  EqKind kind = EqKind::CCE;
  bool satisfied = false;
  double worst_violation = 0;  // max over constraints of lhs - rhs (can be < 0)
  std::string worst_constraint;
  std::vector<double> utilities;
  double tolerance = 0;
};

// Checks the deviation inequalities (and, for NE, the product form) directly
// on the pmf. `satisfied` iff every constraint holds within tol.
CertificationReport certify(const GameSpec& game, const JointPmf& pmf, EqKind kind,
                            double tol = 1e-9);

struct StaticOptResult {
  JointPmf pmf;
  std::vector<double> utilities;
  double value = 0;
  double gap = 0;
  int iterations = 0;
};

// Maximizes the fairness objective over the CE or CCE polytope (NE is not a
// polytope and is rejected). The returned pmf is renormalized exactly.
StaticOptResult optimize_static(const GameSpec& game, const FairnessFunction& phi, EqKind kind,
                                const FwOptions& opts = {});

struct SilhouettePoint {
  double angle;   // direction in the (u1, u2) plane
  double u1, u2;  // utilities of the supporting point found for it
};

// Supports of the equilibrium polytope projected onto the first two players'
// utilities, probed along `num_directions` evenly spaced angles.
std::vector<SilhouettePoint> polytope_silhouette(const GameSpec& game, EqKind kind,
                                                 int num_directions);

// Convex hull vertices (counterclockwise) of a 2-d point cloud; points closer
// than merge_tol collapse and near-collinear chain points are pruned using the
// cross-product area test at collinear_tol.
std::vector<std::array<double, 2>> hull_vertices(std::vector<std::array<double, 2>> points,
                                                 double merge_tol = 1e-7,
                                                 double collinear_tol = 1e-6);

}  // namespace fairgame
