#pragma once

#include <vector>

#include "srbg/feegame.hpp"

namespace srbg {

struct InvalidDelta : ConfigError {
  using ConfigError::ConfigError;
};

struct NoStayRegion : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void validate_delta(double c_r, double c_s, double delta) {
  if (!(delta > 0.0 && delta < c_r - c_s)) throw InvalidDelta("0 < delta < c_r - c_s violated");
}

struct Leaving {
  Outcome outcome;
  double seller_payoff = 0.0;
  double p_sstar_leave = 0.0;  // maximizer of (p - c_s - delta) q(p)
};

/// Seller outside the program with cost c_s + delta; the retailer limits the price to c_r.
inline Leaving leaving_outcome(const DemandCurve& curve, double c_r, double c_s, double delta) {
  validate_costs(c_r, c_s);
  validate_delta(c_r, c_s, delta);
  Leaving l;
  l.p_sstar_leave = cost_opt_price(curve, c_s + delta);
  double p = std::min(c_r, l.p_sstar_leave);
  l.outcome = {p, p, Fulfiller::seller, OutcomeLabel::unlabeled};
  l.seller_payoff = (p - c_s - delta) * curve(p);
  return l;
}

struct StayRegion {
  bool exists = false;
  double alpha_max = 0.0;
  bool contiguous = true;
};

inline constexpr std::size_t stay_grid_n = 10000;

/// Largest fee at which the seller's equilibrium payoff still covers its leaving payoff.
inline StayRegion stay_region(const FeeGame& fg, const StrategyProfile& rho, double leave, std::size_t n = stay_grid_n) {
  const double eps = 1e-9;
  auto xs = num::linspace(eps, 1.0 - eps, n);
  auto ok = [&](double a) { return fg.payoffs(a, rho).seller >= leave; };
  std::vector<char> feas(n);
  for (std::size_t i = 0; i < n; ++i) feas[i] = ok(xs[i]);
  StayRegion r;
  std::size_t last = n, runs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (feas[i]) {
      if (i == 0 || !feas[i - 1]) ++runs;
      last = i;
    }
  }
  if (last == n) return r;
  r.exists = true;
  r.contiguous = runs <= 1;
  if (last + 1 == n) {
    r.alpha_max = xs[last];
    return r;
  }
  double lo = xs[last], hi = xs[last + 1];
  for (int it = 0; it < num::max_iter && hi - lo > fee_tol; ++it) {
    double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  r.alpha_max = lo;
  return r;
}

inline StayRegion alpha_max(const DemandCurve& curve, double c_r, double c_s, double delta, const StrategyProfile& rho) {
  auto lv = leaving_outcome(curve, c_r, c_s, delta);
  return stay_region(FeeGame(Costs{c_r, c_s, 0.5, curve}), rho, lv.seller_payoff);
}

struct FullGameSolution {
  double alpha_star_o = 0.0;
  bool seller_stays = true;
  double alpha_max = 0.0;
  bool stay_contiguous = true;
  Outcome leaving_outcome;
  double leaving_seller_payoff = 0.0;
  double retailer_payoff = 0.0;
  double seller_payoff = 0.0;
  Outcome outcome;
};

/// Retailer's best fee subject to the seller weakly preferring to stay.
inline FullGameSolution solve_full_game(const FeeGame& fg, double delta, const StrategyProfile& rho) {
  const auto& c = fg.costs();
  auto lv = leaving_outcome(c.curve, c.c_r, c.c_s, delta);
  auto region = stay_region(fg, rho, lv.seller_payoff);
  if (!region.exists) throw NoStayRegion("seller prefers leaving at every fee");

  FullGameSolution s;
  s.alpha_max = region.alpha_max;
  s.stay_contiguous = region.contiguous;
  s.leaving_outcome = lv.outcome;
  s.leaving_seller_payoff = lv.seller_payoff;

  auto feasible = [&](double a) { return fg.payoffs(a, rho).seller >= lv.seller_payoff; };
  auto unc = alpha_star(fg, rho);
  double best_a;
  if (feasible(unc.alpha_star)) {
    best_a = unc.alpha_star;
  } else {
    const double eps = 1e-9;
    auto xs = num::linspace(eps, region.alpha_max, stay_grid_n);
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
      ys[i] = feasible(xs[i]) ? fg.payoffs(xs[i], rho).retailer : -1e300;
    std::size_t i = num::first_argmax(ys);
    best_a = xs[i];
    double best_v = ys[i];
    double a0 = xs[i > 0 ? i - 1 : 0], a1 = xs[std::min(i + 1, xs.size() - 1)];
    auto pen = [&](double a) { return feasible(a) ? fg.payoffs(a, rho).retailer : -1e300; };
    double x = num::golden_max(pen, a0, a1);
    if (pen(x) > best_v + 1e-12) {
      best_a = x;
      best_v = pen(x);
    }
    double at_max = pen(region.alpha_max);
    if (at_max > best_v + 1e-12) best_a = region.alpha_max;
  }
  auto e = fg.payoffs(best_a, rho);
  s.alpha_star_o = best_a;
  s.retailer_payoff = e.retailer;
  s.seller_payoff = e.seller;
  s.outcome = e.outcome;
  return s;
}

inline FullGameSolution solve_full_game(const DemandCurve& curve, double c_r, double c_s, double delta,
                                        const StrategyProfile& rho) {
  return solve_full_game(FeeGame(Costs{c_r, c_s, 0.5, curve}), delta, rho);
}

}  // namespace srbg
