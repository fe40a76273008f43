#include "doctest.h"

#include <cmath>
#include <random>

#include "aisr/payoff.hpp"
#include "oracles.hpp"

using namespace aisr;

namespace {

RaceParams fig2(double p_r) { return {1.0, 4.0, 1.5, 1e4, 100.0, p_r, 0.5}; }

}  // namespace

TEST_CASE("per-round payoffs") {
  RaceParams p{1.0, 4.0, 1.5, 1e4, 100.0, 0.5, 0.3};
  CHECK(round_payoff(Action::Safe, Action::Safe, p) == 1.0);

  p.p_fo = 1.0;
  CHECK(round_payoff(Action::Unsafe, Action::Unsafe, p) == 0.0);

  p.p_fo = 0.0;
  CHECK(round_payoff(Action::Unsafe, Action::Safe, p) == doctest::Approx(2.4).epsilon(1e-15));
  // SAFE against UNSAFE keeps the small share b/(s+1) when nobody is caught.
  CHECK(round_payoff(Action::Safe, Action::Unsafe, p) == doctest::Approx(-1.0 + 4.0 / 2.5));
}

TEST_CASE("UNSAFE vs UNSAFE stays within [0, b/2]") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto p = oracle::random_params(rng);
    const double uu = round_payoff(Action::Unsafe, Action::Unsafe, p);
    CHECK(uu >= 0.0);
    CHECK(uu <= p.b / 2);
  }
}

TEST_CASE("averaged payoffs at the figure 2 point") {
  for (double pr : {0.0, 0.3, 0.6, 1.0}) {
    const auto m = averaged_payoff_matrix(fig2(pr));
    CHECK(m.at(Strategy::AS, Strategy::AS) == 51.0);
    CHECK(m.at(Strategy::CS, Strategy::AS) == m.at(Strategy::AS, Strategy::AS));
    CHECK(m.at(Strategy::CS, Strategy::CS) == m.at(Strategy::AS, Strategy::AS));
    CHECK(m.at(Strategy::AS, Strategy::CS) == m.at(Strategy::AS, Strategy::AS));
  }
  const auto dead = averaged_payoff_matrix(fig2(1.0));
  for (auto col : kAllStrategies) CHECK(dead.at(Strategy::AU, col) == 0.0);
}

TEST_CASE("averaged payoffs match a literal transcription over random draws") {
  std::mt19937_64 rng(20240601);
  for (int i = 0; i < 1000; ++i) {
    const auto p = oracle::random_params(rng);
    const auto got = averaged_payoff_matrix(p);
    const auto want = oracle::averaged_matrix(p);
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t c = 0; c < 3; ++c) {
        const double scale = std::max(std::abs(want[r][c]), 1e-300);
        CHECK(std::abs(got(r, c) - want[r][c]) / scale <= 1e-12);
      }
    }
  }
}

TEST_CASE("row identities") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    const auto p = oracle::random_params(rng);
    const auto m = averaged_payoff_matrix(p);
    CHECK(m.at(Strategy::AS, Strategy::AS) == m.at(Strategy::CS, Strategy::AS));
    CHECK(m.at(Strategy::AS, Strategy::CS) == m.at(Strategy::CS, Strategy::CS));

    // Pi(AS,AS) does not depend on p_r or s.
    auto q = p;
    q.p_r = 1.0 - p.p_r;
    q.s = 1.0 + (p.s - 1.0) / 2.0;
    CHECK(averaged_payoff_matrix(q).at(Strategy::AS, Strategy::AS) ==
          m.at(Strategy::AS, Strategy::AS));
  }
}

TEST_CASE("Pi(AU,AU) decreases in p_r and does not increase in p_fo") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    auto p = oracle::random_params(rng);
    auto lo = p, hi = p;
    lo.p_r = 0.5 * p.p_r;
    hi.p_r = p.p_r + 0.5 * (1.0 - p.p_r);
    if (hi.p_r > lo.p_r) {
      CHECK(averaged_payoff_matrix(hi).at(Strategy::AU, Strategy::AU) <
            averaged_payoff_matrix(lo).at(Strategy::AU, Strategy::AU));
    }
    lo = p;
    hi = p;
    lo.p_fo = 0.5 * p.p_fo;
    hi.p_fo = p.p_fo + 0.5 * (1.0 - p.p_fo);
    CHECK(averaged_payoff_matrix(hi).at(Strategy::AU, Strategy::AU) <=
          averaged_payoff_matrix(lo).at(Strategy::AU, Strategy::AU));
  }
}

TEST_CASE("collective preference gap") {
  // p_r = 1 removes AU entirely.
  CHECK(collective_preference_gap(fig2(1.0)) == 51.0);

  // Independent hand evaluation at p_r = 0.5:
  //   Pi(AS,AS) = 1e4/200 - 1 + 2 = 51
  //   Pi(AU,AU) = 0.5 * (1.5e4/200 + 0.75 * 2) = 0.5 * 76.5 = 38.25
  CHECK(collective_preference_gap(fig2(0.5)) == doctest::Approx(12.75).epsilon(1e-14));

  // With B/(W b) = 1e4 the sign flips within 1e-3 of 1 - 1/s.
  for (double s : {1.2, 1.5, 2.0, 3.0}) {
    RaceParams p{1.0, 4.0, s, 4e6, 100.0, 0.0, 0.5};
    const double star = 1.0 - 1.0 / s;
    p.p_r = star - 1e-3;
    CHECK(collective_preference_gap(p) < 0.0);
    p.p_r = star + 1e-3;
    CHECK(collective_preference_gap(p) > 0.0);
  }
}

TEST_CASE("payoff matrix JSON layout") {
  const auto j = to_json(averaged_payoff_matrix(fig2(0.6)));
  CHECK(j["strategies"] == nlohmann::json({"AS", "AU", "CS"}));
  REQUIRE(j["matrix"].size() == 3);
  CHECK(j["matrix"][0][0].get<double>() == 51.0);
}

TEST_CASE("restriction and lookup") {
  const auto m = averaged_payoff_matrix(fig2(0.6));
  const auto sub = m.restrict_to({Strategy::CS, Strategy::AU});
  CHECK(sub.size() == 2);
  CHECK(sub(0, 1) == m.at(Strategy::CS, Strategy::AU));
  CHECK_THROWS_AS(sub.index_of(Strategy::AS), InvalidParams);
  CHECK_THROWS_AS(PayoffMatrix({Strategy::AS, Strategy::AS}, {1, 2, 3, 4}), InvalidParams);
  CHECK_THROWS_AS(PayoffMatrix({Strategy::AS}, {1, 2}), InvalidParams);
}
