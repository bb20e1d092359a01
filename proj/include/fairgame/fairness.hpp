#pragma once

#include <span>
#include <string>
#include <vector>

namespace fairgame {

// Concave, entrywise nondecreasing objective over the vector of long-run
// utilities. Three shapes are supported:
//   weighted_log : sum_i w_i * log(1 + u_i)        (proportional fairness)
//   linear       : sum_i w_i * u_i
//   min_with_cap : min(u_1, ..., u_N, c)           (max-min up to a cap)
// Weights must be nonnegative so the function stays nondecreasing, which the
// drift engine's bound g_max = phi(u^max) relies on.
class FairnessFunction {
 public:
  enum class Kind { WeightedLog, Linear, MinWithCap };

  static FairnessFunction weighted_log(std::vector<double> weights);
  static FairnessFunction linear(std::vector<double> weights);
  static FairnessFunction min_with_cap(int num_players, double cap);

  Kind kind() const { return kind_; }
  int num_players() const { return num_players_; }
  const std::vector<double>& weights() const { return weights_; }
  double cap() const { return cap_; }

  double value(std::span<const double> u) const;

  // A supergradient at u (gradient where differentiable; for min_with_cap the
  // indicator of the first minimizing coordinate, or zero when the cap binds).
  std::vector<double> supergradient(std::span<const double> u) const;

  // max over the box 0 <= u_i <= box[i]; attained at u = box by monotonicity.
  double max_over_box(std::span<const double> box) const;

  // Compact expression form, e.g. "10*log(1+u1)+log(1+u2)", "2*u1+u2",
  // "min(u1,u2,5)". parse() is its inverse.
  std::string to_string() const;
  static FairnessFunction parse(const std::string& text, int num_players);

  bool operator==(const FairnessFunction&) const = default;

 private:
  FairnessFunction(Kind kind, int num_players, std::vector<double> weights, double cap)
      : kind_(kind), num_players_(num_players), weights_(std::move(weights)), cap_(cap) {}

  Kind kind_;
  int num_players_;
  std::vector<double> weights_;  // empty for min_with_cap
  double cap_ = 0;               // only for min_with_cap
};

}  // namespace fairgame
