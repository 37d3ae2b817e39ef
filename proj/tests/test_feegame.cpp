#include <catch_amalgamated.hpp>

#include <random>

#include "reference.hpp"
#include "srbg/feegame.hpp"
#include "srbg/verify.hpp"

using namespace srbg;
using Catch::Approx;

namespace {

FeeGame running() { return FeeGame(Costs{0.6, 0.4, 0.5, DemandCurve::linear()}); }

}  // namespace

TEST_CASE("equilibrium payoffs at the ends of the fee range") {
  auto fg = running();
  auto top = fg.payoffs(0.7, StrategyProfile::low());
  CHECK(top.retailer == Approx(0.04));
  CHECK(top.seller == 0.0);
  auto low = fg.payoffs(0.1, StrategyProfile::low());
  GameParams g = at_alpha(fg.costs(), 0.1);
  CHECK(low.retailer == Approx(pi_rs(g, 0.6 / 0.9)));
  CHECK(low.seller == Approx(pi_ss(g, 0.6 / 0.9)));
}

TEST_CASE("low selection pays the retailer at least the high selection") {
  auto fg = running();
  for (double a = 0.34; a < 0.56; a += 0.01)
    CHECK(fg.payoffs(a, StrategyProfile::low()).retailer >= fg.payoffs(a, StrategyProfile::high()).retailer - 1e-12);
}

TEST_CASE("custom tables interpolate and clamp into the continuum") {
  auto rho = StrategyProfile::custom({{0.6, 0.9}, {0.4, 0.8}});
  CHECK(rho.table_price(0.5) == Approx(0.85));
  CHECK(rho.table_price(0.1) == Approx(0.8));
  auto fg = running();
  auto e = fg.payoffs(0.45, StrategyProfile::custom({{0.0, 0.99}, {1.0, 0.99}}));
  CHECK(e.clamped);
  CHECK(e.outcome.price_lo == Approx((1.0 + 0.4 / 0.55) / 2.0));
}

TEST_CASE("alpha_bar on the running example") {
  auto fg = running();
  auto ab = alpha_bar(fg);
  double want = ref::argmax(
      [](double a) {
        double s = 0.4 / (1.0 - a);
        return a * (1.0 - s * s) / 4.0;
      },
      0.0, 0.6);
  CHECK(ab.alpha == Approx(want).margin(1e-7));
  CHECK(ab.alpha == Approx(0.393608).margin(1e-6));
  CHECK(ab.value == Approx(0.0555849).margin(1e-6));
  CHECK(ab.exceeds);
  auto t = fg.fees();
  CHECK(ab.alpha >= t.alpha_sstar);
  CHECK(ab.alpha <= t.alpha_sdagger);
}

TEST_CASE("optimal fees on the running example") {
  auto fg = running();
  auto lo = alpha_star(fg, StrategyProfile::low());
  CHECK(lo.alpha_star == Approx(0.5).margin(1e-9));
  CHECK(lo.retailer_payoff == Approx(0.08));
  auto hi = alpha_star(fg, StrategyProfile::high());
  CHECK(hi.alpha_star == Approx(alpha_bar(fg).alpha).margin(1e-12));
  REQUIRE(hi.alpha_bar.has_value());
  auto sweep = alpha_star_sweep(fg, StrategyProfile::high());
  CHECK(sweep.second == Approx(hi.retailer_payoff).margin(1e-9));
}

TEST_CASE("high selection without a profitable seller price falls back to alpha_rdagger") {
  FeeGame fg(Costs{0.3, 0.25, 0.5, DemandCurve::linear()});
  auto ab = alpha_bar(fg);
  REQUIRE_FALSE(ab.exceeds);
  auto hi = alpha_star(fg, StrategyProfile::high());
  CHECK(hi.alpha_star == Approx(std::max(fg.fees().alpha_rdagger, fg.fees().alpha_opt)).margin(1e-9));
}

TEST_CASE("a low-cost seller region can beat alpha_rstar under the low selection") {
  Costs c{0.95, 0.1, 0.5, DemandCurve::linear()};
  FeeGame fg(c);
  auto at_rstar = fg.payoffs(fg.fees().alpha_rstar, StrategyProfile::low());
  auto mid = fg.payoffs(0.5, StrategyProfile::low());
  CHECK(at_rstar.retailer == Approx(0.021875).margin(1e-9));
  CHECK(mid.outcome.label == OutcomeLabel::psstar_s);
  CHECK(mid.retailer == Approx(0.12).margin(1e-9));
  auto cell = verify::verify_cell(c, fg.fees(), 0.5, oracle::GridSpec{});
  CHECK(cell.status == verify::Status::agree);
  auto best = alpha_star(fg, StrategyProfile::low());
  CHECK(best.retailer_payoff >= 0.12);
  CHECK(best.alpha_star != Approx(fg.fees().alpha_rstar).margin(1e-6));
}

TEST_CASE("custom selection maximizer beats random fees") {
  auto fg = running();
  auto rho = StrategyProfile::custom({{0.3, 0.9}, {0.45, 0.8}, {0.6, 1.0}});
  auto s = alpha_star(fg, rho);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 200; ++i) CHECK(fg.payoffs(U(rng), rho).retailer <= s.retailer_payoff + 1e-9);
}

TEST_CASE("retailer payoff upper bound equals the referral income at alpha_rstar") {
  auto fg = running();
  auto b = payoff_bounds(fg);
  auto t = fg.fees();
  GameParams g = at_alpha(fg.costs(), t.alpha_rstar);
  CHECK(b.retailer.hi == Approx(pi_rs(g, t.p_rstar)).margin(1e-12));
  CHECK(b.retailer.hi == Approx(pi_rs(g, 0.4 / (1.0 - t.alpha_rstar))).margin(1e-12));
  CHECK(b.retailer.lo >= fg.target() - 1e-12);
  for (auto rho : {StrategyProfile::low(), StrategyProfile::high()}) {
    double a = alpha_star(fg, rho).alpha_star;
    CHECK(a >= b.alpha.lo - 1e-9);
    CHECK(a <= b.alpha.hi + 1e-9);
  }
}
