#include <catch_amalgamated.hpp>

#include <random>

#include "reference.hpp"
#include "srbg/fees.hpp"

using namespace srbg;
using Catch::Approx;

TEST_CASE("threshold fees on the running example") {
  auto t = threshold_fees(DemandCurve::linear(), 0.6, 0.4);
  CHECK(t.p_rstar == Approx(0.8).margin(1e-12));
  CHECK(t.alpha_opt == Approx(1.0 / 3.0).margin(1e-9));
  CHECK(t.alpha_rstar == Approx(0.5).margin(1e-9));
  CHECK(t.alpha_rdagger == Approx(0.25).margin(1e-9));
  CHECK(t.c_sstar == Approx(0.45).margin(1e-9));
  CHECK(t.alpha_sstar == Approx(0.2).margin(1e-9));
  CHECK(t.alpha_sstar_feasible);
}

TEST_CASE("alpha_sdagger solves the referral break-even equation") {
  auto t = threshold_fees(DemandCurve::linear(), 0.6, 0.4);
  auto f = [](double a) {
    double s = 0.4 / (1.0 - a);
    return a * s * (1.0 - s) - 0.04;
  };
  double want = ref::root(f, 0.5, 0.6);
  CHECK(t.alpha_sdagger == Approx(want).margin(1e-9));
  CHECK(t.alpha_sdagger == Approx(0.566915).margin(1e-6));
}

TEST_CASE("linear alpha_sstar equals 1 - 2 c_r + c_s") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    double cr = 0.05 + 0.9 * U(rng);
    double cs = cr * (0.02 + 0.96 * U(rng));
    auto t = threshold_fees(DemandCurve::linear(), cr, cs);
    CHECK(t.alpha_sstar == Approx(1.0 - 2.0 * cr + cs).margin(1e-9));
    CHECK(t.alpha_sstar_feasible == (1.0 - 2.0 * cr + cs >= 0.0));
  }
}

TEST_CASE("fee ordering properties") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    double cr = 0.05 + 0.9 * U(rng);
    double cs = cr * (0.02 + 0.96 * U(rng));
    auto t = threshold_fees(DemandCurve::linear(), cr, cs);
    CHECK(t.alpha_rdagger < t.alpha_rstar);
    CHECK(t.alpha_rstar <= t.alpha_sdagger + 1e-12);
    CHECK(t.alpha_sdagger <= 1.0 - cs + 1e-12);
    if (cs <= t.c_sstar) {
      CHECK(t.alpha_sstar <= t.alpha_opt + 1e-9);
      CHECK(t.alpha_rdagger <= t.alpha_opt + 1e-9);
    } else {
      CHECK(t.alpha_opt <= t.alpha_rdagger + 1e-9);
    }
  }
}

TEST_CASE("alpha_opt vanishes as c_s approaches c_r") {
  auto t = threshold_fees(DemandCurve::linear(), 0.6, 0.6 - 1e-9);
  CHECK(t.alpha_opt == Approx(0.0).margin(1e-8));
}
