#include <catch_amalgamated.hpp>

#include <random>

#include "srbg/outside.hpp"

using namespace srbg;
using Catch::Approx;

TEST_CASE("leaving outcome clamps the seller at the retailer's cost") {
  auto lv = leaving_outcome(DemandCurve::linear(), 0.6, 0.4, 0.1);
  CHECK(lv.p_sstar_leave == Approx(0.75));
  CHECK(lv.outcome.price_lo == Approx(0.6));
  CHECK(lv.seller_payoff == Approx(0.04));
  auto edge = leaving_outcome(DemandCurve::linear(), 0.6, 0.4, 0.2 - 1e-9);
  CHECK(edge.seller_payoff == Approx(0.0).margin(1e-8));
}

TEST_CASE("delta outside its range is rejected") {
  CHECK_THROWS_AS(leaving_outcome(DemandCurve::linear(), 0.6, 0.4, 0.2), InvalidDelta);
  CHECK_THROWS_AS(leaving_outcome(DemandCurve::linear(), 0.6, 0.4, 0.0), InvalidDelta);
}

TEST_CASE("alpha_max marks where staying stops paying") {
  FeeGame fg(Costs{0.6, 0.4, 0.5, DemandCurve::linear()});
  auto lv = leaving_outcome(DemandCurve::linear(), 0.6, 0.4, 0.15);
  auto r = stay_region(fg, StrategyProfile::high(), lv.seller_payoff);
  REQUIRE(r.exists);
  CHECK(fg.payoffs(r.alpha_max, StrategyProfile::high()).seller >= lv.seller_payoff);
  CHECK(fg.payoffs(r.alpha_max + 1e-6, StrategyProfile::high()).seller < lv.seller_payoff);
}

TEST_CASE("alpha_max is nondecreasing in delta") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 40; ++k) {
    double cr = 0.1 + 0.85 * U(rng);
    double cs = cr * (0.05 + 0.9 * U(rng));
    double d1 = (cr - cs) * (0.05 + 0.9 * U(rng));
    double d2 = d1 + (cr - cs - d1) * U(rng);
    auto a1 = alpha_max(DemandCurve::linear(), cr, cs, d1, StrategyProfile::high());
    auto a2 = alpha_max(DemandCurve::linear(), cr, cs, d2, StrategyProfile::high());
    if (a1.exists) {
      REQUIRE(a2.exists);
      CHECK(a2.alpha_max >= a1.alpha_max - 1e-8);
    }
  }
}

TEST_CASE("full game respects the stay constraint") {
  for (double delta : {0.02, 0.062, 0.12, 0.19}) {
    for (auto rho : {StrategyProfile::low(), StrategyProfile::high()}) {
      auto s = solve_full_game(DemandCurve::linear(), 0.6, 0.4, delta, rho);
      CHECK(s.alpha_star_o <= s.alpha_max + 1e-12);
      CHECK(s.seller_payoff >= s.leaving_seller_payoff - 1e-12);
    }
  }
}

TEST_CASE("unconstrained optimum is kept when the seller stays there") {
  auto s = solve_full_game(DemandCurve::linear(), 0.6, 0.4, 0.19, StrategyProfile::high());
  FeeGame fg(Costs{0.6, 0.4, 0.5, DemandCurve::linear()});
  CHECK(s.alpha_star_o == Approx(alpha_star(fg, StrategyProfile::high()).alpha_star));
}
