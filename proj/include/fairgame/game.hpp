#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairgame/mixed_radix.hpp"
#include "fairgame/rng.hpp"

namespace fairgame {

// Raw game description as read from a file or assembled by a caller. Player i
// observes event component i+1; component 0 is seen only by the game manager.
// Tables are dense:
//   event_pmf[w]        over joint events, component 0 most significant
//   utilities[i][a*W+w] with a the joint action index (player 0 most
//                       significant) and W the number of joint events
// utility_caps may be empty, in which case each player's cap defaults to the
// observed maximum of their table.
struct GameDef {
  std::vector<std::vector<std::string>> actions;  // [player][action] labels
  std::vector<std::vector<std::string>> events;   // [component][value] labels
  std::vector<double> event_pmf;
  std::vector<std::vector<double>> utilities;
  std::vector<double> utility_caps;
};

// Validated, immutable game. Construct through validate().
class GameSpec {
 public:
  GameSpec() = default;  // empty game; obtain a usable one through validate()

  // Checks alphabet sizes, label uniqueness, table shapes, pmf validity
  // (entries >= 0, sum within 1e-12 of 1), utility range [0, cap] and the
  // enumeration cap of 1e6 joint actions/events. Throws ValidationError or
  // SizeCapError.
  static GameSpec validate(GameDef def);

  int num_players() const { return static_cast<int>(def_.actions.size()); }
  int num_actions(int player) const { return static_cast<int>(def_.actions[player].size()); }
  int num_event_components() const { return static_cast<int>(def_.events.size()); }
  int event_component_size(int k) const { return static_cast<int>(def_.events[k].size()); }
  int num_player_events(int player) const { return event_component_size(player + 1); }

  const MixedRadix& action_space() const { return action_space_; }
  const MixedRadix& event_space() const { return event_space_; }
  std::int64_t num_joint_actions() const { return action_space_.size(); }
  std::int64_t num_joint_events() const { return event_space_.size(); }

  double event_prob(std::int64_t w) const { return def_.event_pmf[w]; }
  double utility(int player, std::int64_t a, std::int64_t w) const {
    return def_.utilities[player][a * num_joint_events() + w];
  }
  double utility_cap(int player) const { return caps_[player]; }
  const std::vector<double>& utility_caps() const { return caps_; }

  const std::string& action_label(int player, int a) const { return def_.actions[player][a]; }
  const std::string& event_label(int k, int v) const { return def_.events[k][v]; }

  int event_component(std::int64_t w, int k) const { return event_space_.digit(w, k); }
  int player_event(std::int64_t w, int player) const { return event_space_.digit(w, player + 1); }
  std::int64_t with_action(std::int64_t a, int player, int b) const {
    return action_space_.with_digit(a, player, b);
  }

  // P[omega_{player} = v], marginalized over the other components.
  double player_event_marginal(int player, int v) const {
    return player_marginals_[player][v];
  }

  // Inverse-cdf sampling; zero-mass events are never drawn.
  std::int64_t sample_event(SplitMix64& rng) const;

  const GameDef& def() const { return def_; }
  bool operator==(const GameSpec& o) const;

 private:
  GameDef def_;
  MixedRadix action_space_, event_space_;
  std::vector<double> caps_;
  std::vector<std::vector<double>> player_marginals_;
  std::vector<double> event_cdf_;
};

inline GameSpec validate_game(GameDef def) { return GameSpec::validate(std::move(def)); }

// Distribution over joint actions (a static correlated device).
class JointPmf {
 public:
  JointPmf() = default;
  // entries >= -tol (tiny negatives are clamped to 0), sum within tol of 1.
  static JointPmf validated(const GameSpec& game, std::vector<double> probs, double tol = 1e-12);
  const std::vector<double>& probs() const { return probs_; }
  double operator[](std::int64_t a) const { return probs_[a]; }

 private:
  std::vector<double> probs_;
};

// Conditional distribution over joint actions given the joint event,
// Pr[alpha | omega], stored dense as rows_[w*A + a]. Rows for zero-probability
// events carry no constraint; validated() zeroes them.
class ConditionalPolicy {
 public:
  ConditionalPolicy() = default;
  // every row with event_prob > 0 must be a pmf (sum within tol of 1);
  // allow_empty_rows additionally permits all-zero rows, which empirical
  // policies use for events a finite trace never visited.
  static ConditionalPolicy validated(const GameSpec& game, std::vector<double> rows,
                                     double tol = 1e-12, bool allow_empty_rows = false);
  double prob(const GameSpec& game, std::int64_t w, std::int64_t a) const {
    return rows_[w * game.num_joint_actions() + a];
  }
  const std::vector<double>& rows() const { return rows_; }

 private:
  std::vector<double> rows_;
};

}  // namespace fairgame
