#pragma once

#include "srbg/prices.hpp"

namespace srbg {

struct ThresholdFees {
  double alpha_rstar = 0.0;
  double alpha_sstar = 0.0;  // negative when the (p_rind, s) region below it is empty
  bool alpha_sstar_feasible = true;
  double alpha_opt = 0.0;  // α_{s*,r*}
  double alpha_rdagger = 0.0;
  double alpha_sdagger = 0.0;
  double c_sstar = 0.0;
  double p_rstar = 0.0;

  bool case_i(const Costs& c) const { return c.c_s <= c_sstar; }
};

inline constexpr double fee_tol = 1e-14;

namespace detail {

// p_rind(α) - p_sstar(α): increasing in α, negative below α_s*.
inline double sstar_gap(const Costs& c, double a) {
  GameParams g = at_alpha(c, a);
  return c.c_r / (1.0 - a) - seller_opt_price(g);
}

inline double solve_alpha_sstar(const Costs& c, bool& feasible) {
  const double hi = 1.0 - c.c_s;
  auto grid = num::linspace(0.0, hi, 1001);
  double prev = sstar_gap(c, grid[0]);
  feasible = true;
  if (prev == 0.0) return 0.0;
  if (prev < 0.0) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
      double cur = sstar_gap(c, grid[i]);
      if (cur >= 0.0)
        return num::bisect([&](double a) { return sstar_gap(c, a); }, grid[i - 1], grid[i], fee_tol);
      prev = cur;
    }
    return hi;
  }
  // positive on the whole fee range: continue the same equation into negative fees
  feasible = false;
  for (double lo = -1.0; lo > -64.0; lo *= 2.0)
    if (sstar_gap(c, lo) < 0.0) return num::bisect([&](double a) { return sstar_gap(c, a); }, lo, 0.0, fee_tol);
  return -1.0;
}

}  // namespace detail

inline ThresholdFees threshold_fees(const Costs& c) {
  validate(c);
  ThresholdFees t;
  double pr = cost_opt_price(c.curve, c.c_r);
  t.p_rstar = pr;
  t.alpha_rstar = 1.0 - c.c_s / pr;
  t.alpha_opt = 1.0 - c.c_s / c.c_r;
  t.alpha_rdagger = 1.0 - c.c_r / pr;
  t.c_sstar = c.c_r * c.c_r / pr;
  t.alpha_sstar = detail::solve_alpha_sstar(c, t.alpha_sstar_feasible);

  double target = (pr - c.c_r) * c.curve(pr);
  auto h = [&](double a) {
    double ps = c.c_s / (1.0 - a);
    return a * ps * c.curve(std::min(ps, 1.0)) - target;
  };
  t.alpha_sdagger = num::bisect(h, t.alpha_rstar, 1.0 - c.c_s, fee_tol);
  return t;
}

inline ThresholdFees threshold_fees(const DemandCurve& curve, double c_r, double c_s) {
  return threshold_fees(Costs{c_r, c_s, 0.5, curve});
}

/// Shifts every fee threshold by `by`; a fault-injection hook for the verifier.
inline ThresholdFees perturbed(ThresholdFees t, double by) {
  t.alpha_rstar += by;
  t.alpha_sstar += by;
  t.alpha_opt += by;
  t.alpha_rdagger += by;
  t.alpha_sdagger += by;
  return t;
}

}  // namespace srbg
