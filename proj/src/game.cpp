#include "fairgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fairgame/errors.hpp"

namespace fairgame {

namespace {
constexpr double kPmfTol = 1e-12;
constexpr std::int64_t kJointCap = 1000000;

void check_labels(const std::vector<std::string>& labels, const std::string& what) {
  if (labels.empty()) throw ValidationError(what + " alphabet is empty");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw ValidationError(what + " has an empty label");
    if (!seen.insert(l).second) throw ValidationError(what + " label '" + l + "' repeats");
  }
}
}  // namespace

GameSpec GameSpec::validate(GameDef def) {
  if (def.actions.empty()) throw ValidationError("game needs at least one player");
  const int n = static_cast<int>(def.actions.size());
  if (static_cast<int>(def.events.size()) != n + 1)
    throw ValidationError("game needs one event component per player plus the manager's");

  for (int i = 0; i < n; ++i) check_labels(def.actions[i], "player " + std::to_string(i + 1));
  for (int k = 0; k <= n; ++k) check_labels(def.events[k], "event component " + std::to_string(k));

  GameSpec g;
  std::vector<int> asz(n), esz(n + 1);
  for (int i = 0; i < n; ++i) asz[i] = static_cast<int>(def.actions[i].size());
  for (int k = 0; k <= n; ++k) esz[k] = static_cast<int>(def.events[k].size());
  g.action_space_ = MixedRadix(asz);
  g.event_space_ = MixedRadix(esz);
  const std::int64_t A = g.action_space_.size(), W = g.event_space_.size();
  if (A > kJointCap) throw SizeCapError("joint action space exceeds 1e6");
  if (W > kJointCap) throw SizeCapError("joint event space exceeds 1e6");

  if (static_cast<std::int64_t>(def.event_pmf.size()) != W)
    throw ValidationError("event pmf length does not match joint event count");
  double sum = 0;
  for (double p : def.event_pmf) {
    if (!std::isfinite(p) || p < -kPmfTol) throw ValidationError("event pmf entry out of range");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kPmfTol)
    throw ValidationError("event pmf must sum to 1 within 1e-12");
  for (double& p : def.event_pmf) p = std::max(p, 0.0);

  if (static_cast<int>(def.utilities.size()) != n)
    throw ValidationError("need one utility table per player");
  g.caps_.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (static_cast<std::int64_t>(def.utilities[i].size()) != A * W)
      throw ValidationError("utility table for player " + std::to_string(i + 1) +
                            " has wrong size");
    double mx = 0;
    for (double u : def.utilities[i]) {
      if (!std::isfinite(u) || u < 0)
        throw ValidationError("utilities must be finite and nonnegative");
      mx = std::max(mx, u);
    }
    g.caps_[i] = mx;
  }
  if (!def.utility_caps.empty()) {
    if (static_cast<int>(def.utility_caps.size()) != n)
      throw ValidationError("utility_caps length must equal the player count");
    for (int i = 0; i < n; ++i) {
      if (!std::isfinite(def.utility_caps[i]) || def.utility_caps[i] < g.caps_[i])
        throw ValidationError("declared utility cap below an observed utility");
      g.caps_[i] = def.utility_caps[i];
    }
  }

  g.player_marginals_.assign(n, {});
  for (int i = 0; i < n; ++i) {
    g.player_marginals_[i].assign(esz[i + 1], 0.0);
    for (std::int64_t w = 0; w < W; ++w)
      g.player_marginals_[i][g.event_space_.digit(w, i + 1)] += def.event_pmf[w];
  }

  g.event_cdf_.resize(W);
  double acc = 0;
  for (std::int64_t w = 0; w < W; ++w) {
    acc += def.event_pmf[w];
    g.event_cdf_[w] = acc;
  }

  g.def_ = std::move(def);
  return g;
}

std::int64_t GameSpec::sample_event(SplitMix64& rng) const {
  const double r = rng.next_double();
  auto it = std::upper_bound(event_cdf_.begin(), event_cdf_.end(), r);
  if (it == event_cdf_.end()) {
    // r landed beyond the accumulated mass (sum can be 1-1e-12); take the last
    // positive-probability event.
    std::int64_t w = num_joint_events() - 1;
    while (w > 0 && def_.event_pmf[w] == 0.0) --w;
    return w;
  }
  return it - event_cdf_.begin();
}

bool GameSpec::operator==(const GameSpec& o) const {
  return def_.actions == o.def_.actions && def_.events == o.def_.events &&
         def_.event_pmf == o.def_.event_pmf && def_.utilities == o.def_.utilities &&
         caps_ == o.caps_;
}

JointPmf JointPmf::validated(const GameSpec& game, std::vector<double> probs, double tol) {
  if (static_cast<std::int64_t>(probs.size()) != game.num_joint_actions())
    throw ValidationError("joint pmf length does not match the joint action count");
  double sum = 0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < -tol) throw ValidationError("joint pmf entry out of range");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol) throw ValidationError("joint pmf must sum to 1");
  for (double& p : probs) p = std::max(p, 0.0);
  JointPmf out;
  out.probs_ = std::move(probs);
  return out;
}

ConditionalPolicy ConditionalPolicy::validated(const GameSpec& game, std::vector<double> rows,
                                               double tol, bool allow_empty_rows) {
  const std::int64_t A = game.num_joint_actions(), W = game.num_joint_events();
  if (static_cast<std::int64_t>(rows.size()) != A * W)
    throw ValidationError("conditional policy has wrong size");
  for (std::int64_t w = 0; w < W; ++w) {
    if (game.event_prob(w) == 0.0) {
      std::fill(rows.begin() + w * A, rows.begin() + (w + 1) * A, 0.0);
      continue;
    }
    double sum = 0;
    for (std::int64_t a = 0; a < A; ++a) {
      double& p = rows[w * A + a];
      if (!std::isfinite(p) || p < -tol)
        throw ValidationError("conditional policy entry out of range");
      p = std::max(p, 0.0);
      sum += p;
    }
    if (allow_empty_rows && sum == 0.0) continue;
    if (std::abs(sum - 1.0) > tol)
      throw ValidationError("conditional policy row must sum to 1 for events with mass");
  }
  ConditionalPolicy out;
  out.rows_ = std::move(rows);
  return out;
}

}  // namespace fairgame
