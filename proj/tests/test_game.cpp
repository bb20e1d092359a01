#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "fairgame/errors.hpp"
#include "fairgame/game.hpp"
#include "fairgame/mixed_radix.hpp"
#include "fairgame/rng.hpp"
#include "support/test_games.hpp"

using namespace fairgame;
using namespace testsupport;

TEST_CASE("mixed radix round-trips with player 0 most significant") {
  MixedRadix mr({3, 2});
  CHECK(mr.size() == 6);
  CHECK(mr.num_digits() == 2);
  CHECK(mr.stride(0) == 2);
  CHECK(mr.stride(1) == 1);
  for (std::int64_t idx = 0; idx < mr.size(); ++idx) {
    const auto digits = mr.decode(idx);
    CHECK(mr.encode(digits) == idx);
    for (int pos = 0; pos < mr.num_digits(); ++pos) CHECK(mr.digit(idx, pos) == digits[pos]);
  }
  CHECK(mr.encode({2, 1}) == 5);
  CHECK(mr.encode({1, 0}) == 2);
}

TEST_CASE("mixed radix digit substitution matches full re-encode") {
  MixedRadix mr({2, 3, 4});
  for (std::int64_t idx = 0; idx < mr.size(); ++idx) {
    for (int pos = 0; pos < 3; ++pos) {
      for (int val = 0; val < mr.digit_size(pos); ++val) {
        auto digits = mr.decode(idx);
        digits[pos] = val;
        CHECK(mr.with_digit(idx, pos, val) == mr.encode(digits));
      }
    }
  }
}

TEST_CASE("mixed radix rejects bad sizes and overflow") {
  CHECK_THROWS_AS(MixedRadix({2, 0}), ValidationError);
  CHECK_THROWS_AS(MixedRadix({-1}), ValidationError);
  CHECK_THROWS_AS(MixedRadix(std::vector<int>(11, 1 << 6)), SizeCapError);
  CHECK(MixedRadix(std::vector<int>{}).size() == 0);
}

TEST_CASE("splitmix64 matches the published reference outputs") {
  SplitMix64 rng(0);
  CHECK(rng.next_u64() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next_u64() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next_u64() == 0x06C45D188009454FULL);
  CHECK(rng.next_u64() == 0xF88BB8A8724C81ECULL);

  SplitMix64 rng2(1234567);
  CHECK(rng2.next_u64() == 0x599ED017FB08FC85ULL);
  CHECK(rng2.next_u64() == 0x2C73F08458540FA5ULL);
  CHECK(rng2.next_u64() == 0x883EBCE5A3F27C77ULL);
}

TEST_CASE("splitmix64 doubles use the top 53 bits") {
  SplitMix64 rng(0);
  CHECK(rng.next_double() == doctest::Approx(0.8833108082136426).epsilon(1e-15));
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.next_double();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("splitmix64 streams with different seeds decorrelate") {
  SplitMix64 a(1), b(2);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += (a.next_u64() == b.next_u64());
  CHECK(same == 0);
}

TEST_CASE("game accessors expose shapes, labels and caps") {
  const GameSpec g = fig1();
  CHECK(g.num_players() == 2);
  CHECK(g.num_actions(0) == 3);
  CHECK(g.num_actions(1) == 2);
  CHECK(g.num_joint_actions() == 6);
  CHECK(g.num_joint_events() == 1);
  CHECK(g.num_event_components() == 3);
  CHECK(g.utility_cap(0) == 5.0);
  CHECK(g.utility_cap(1) == 50.0);
  CHECK(g.action_label(0, 2) == "gamma");
  CHECK(g.action_label(1, 1) == "beta");
  CHECK(g.utility(0, g.action_space().encode({0, 1}), 0) == 5.0);
  CHECK(g.utility(1, g.action_space().encode({0, 0}), 0) == 50.0);
  CHECK(g.utility(1, g.action_space().encode({2, 1}), 0) == 0.0);
}

TEST_CASE("each player observes their own event component") {
  const GameSpec g = stoch222();
  CHECK(g.num_joint_events() == 4);
  // component 0 belongs to the manager, players see components 1 and 2
  for (std::int64_t w = 0; w < 4; ++w) {
    CHECK(g.player_event(w, 0) == g.event_component(w, 1));
    CHECK(g.player_event(w, 1) == g.event_component(w, 2));
  }
  CHECK(g.num_player_events(0) == 2);
  CHECK(g.event_component_size(0) == 1);
  CHECK(g.event_label(1, 0) == "0");
}

TEST_CASE("event marginals sum the pmf over the other components") {
  const GameSpec g = stoch222();
  CHECK(g.event_prob(0) == doctest::Approx(0.4));
  CHECK(g.event_prob(1) == doctest::Approx(0.1));
  // P(omega_1 = 0) = 0.4 + 0.1
  CHECK(g.player_event_marginal(0, 0) == doctest::Approx(0.5));
  CHECK(g.player_event_marginal(0, 1) == doctest::Approx(0.5));
  CHECK(g.player_event_marginal(1, 0) == doctest::Approx(0.5));
  double total = 0;
  for (int v = 0; v < g.num_player_events(0); ++v) total += g.player_event_marginal(0, v);
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("unilateral action substitution matches decode-edit-encode") {
  const GameSpec g = stoch222();
  const auto& space = g.action_space();
  for (std::int64_t a = 0; a < g.num_joint_actions(); ++a) {
    for (int i = 0; i < g.num_players(); ++i) {
      for (int b = 0; b < g.num_actions(i); ++b) {
        auto digits = space.decode(a);
        digits[i] = b;
        CHECK(g.with_action(a, i, b) == space.encode(digits));
      }
    }
  }
}

TEST_CASE("event sampling tracks the pmf and skips zero-mass cells") {
  GameDef def = stoch222().def();
  def.event_pmf = {0.6, 0.0, 0.1, 0.3};
  const GameSpec g = GameSpec::validate(std::move(def));
  SplitMix64 rng(42);
  std::vector<int> counts(4, 0);
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) ++counts[g.sample_event(rng)];
  CHECK(counts[1] == 0);
  for (std::int64_t w = 0; w < 4; ++w)
    CHECK(static_cast<double>(counts[w]) / draws ==
          doctest::Approx(g.event_prob(w)).epsilon(0.02));
}

TEST_CASE("validation rejects malformed definitions") {
  SUBCASE("no players") {
    GameDef def;
    CHECK_THROWS_AS(GameSpec::validate(std::move(def)), ValidationError);
  }
  SUBCASE("missing event component") {
    GameDef def = fig1().def();
    def.events.pop_back();
    CHECK_THROWS_AS(GameSpec::validate(std::move(def)), ValidationError);
  }
  SUBCASE("pmf does not sum to one") {
    GameDef def = stoch222().def();
    def.event_pmf = {0.4, 0.1, 0.1, 0.3};
    CHECK_THROWS_AS(GameSpec::validate(std::move(def)), ValidationError);
  }
  SUBCASE("pmf length mismatch") {
    GameDef def = stoch222().def();
    def.event_pmf = {0.5, 0.5};
    CHECK_THROWS_AS(GameSpec::validate(std::move(def)), ValidationError);
  }
  SUBCASE("negative utility") {
    GameDef def = fig1().def();
    def.utilities[0][0] = -1.0;
    CHECK_THROWS_AS(GameSpec::validate(std::move(def)), ValidationError);
  }
  SUBCASE("non-finite utility") {
    GameDef def = fig1().def();
    def.utilities[1][3] = std::nan("");
    CHECK_THROWS_AS(GameSpec::validate(std::move(def)), ValidationError);
  }
  SUBCASE("cap below an observed utility") {
    GameDef def = fig1().def();
    def.utility_caps[1] = 40.0;
    CHECK_THROWS_AS(GameSpec::validate(std::move(def)), ValidationError);
  }
  SUBCASE("utility table size mismatch") {
    GameDef def = fig1().def();
    def.utilities[0].pop_back();
    CHECK_THROWS_AS(GameSpec::validate(std::move(def)), ValidationError);
  }
  SUBCASE("duplicate action label") {
    GameDef def = fig1().def();
    def.actions[0][1] = "alpha";
    CHECK_THROWS_AS(GameSpec::validate(std::move(def)), ValidationError);
  }
}

TEST_CASE("caps default to the max observed utility when omitted") {
  GameDef def = fig1().def();
  def.utility_caps.clear();
  const GameSpec g = GameSpec::validate(std::move(def));
  CHECK(g.utility_cap(0) == 5.0);
  CHECK(g.utility_cap(1) == 50.0);
}

TEST_CASE("game equality compares full definitions") {
  CHECK(fig1() == fig1());
  GameDef def = fig1().def();
  def.utilities[0][0] += 0.5;
  CHECK(!(fig1() == GameSpec::validate(std::move(def))));
}

TEST_CASE("joint pmf validation checks shape, range and mass") {
  const GameSpec g = fig1();
  const auto pmf = JointPmf::validated(g, {0, 0, 0.45, 0.15, 0.3, 0.1});
  CHECK(pmf[2] == doctest::Approx(0.45));
  CHECK_THROWS_AS(JointPmf::validated(g, {0.5, 0.5}), ValidationError);
  CHECK_THROWS_AS(JointPmf::validated(g, {0.3, 0, 0.45, 0.15, 0.3, 0.1}), ValidationError);
  CHECK_THROWS_AS(JointPmf::validated(g, {-0.1, 0.1, 0.45, 0.15, 0.3, 0.1}), ValidationError);
}

TEST_CASE("conditional policy rows must be distributions on charged events") {
  const GameSpec g = stoch222();
  const std::int64_t A = g.num_joint_actions();
  std::vector<double> rows(static_cast<std::size_t>(4 * A), 0.0);
  for (std::int64_t w = 0; w < 4; ++w) rows[static_cast<std::size_t>(w * A)] = 1.0;
  const auto pol = ConditionalPolicy::validated(g, rows);
  CHECK(pol.prob(g, 2, 0) == doctest::Approx(1.0));
  CHECK(pol.prob(g, 2, 1) == 0.0);

  rows[0] = 0.5;
  CHECK_THROWS_AS(ConditionalPolicy::validated(g, rows), ValidationError);

  SUBCASE("zero-mass events are unconstrained, charged events need full rows") {
    GameDef def = stoch222().def();
    def.event_pmf = {0.5, 0.5, 0.0, 0.0};
    const GameSpec gz = GameSpec::validate(std::move(def));
    std::vector<double> rz(static_cast<std::size_t>(4 * A), 0.0);
    rz[0] = 1.0;
    rz[static_cast<std::size_t>(2 * A)] = 1.0;
    CHECK_THROWS_AS(ConditionalPolicy::validated(gz, rz), ValidationError);
    const auto pz = ConditionalPolicy::validated(gz, rz, 1e-12, true);
    CHECK(pz.prob(gz, 2, 0) == 0.0);
    rz[static_cast<std::size_t>(A)] = 1.0;
    CHECK_NOTHROW(ConditionalPolicy::validated(gz, rz));
  }
}
