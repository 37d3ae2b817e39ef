#pragma once

#include <cmath>
#include <optional>

#include "srbg/payoff.hpp"

namespace srbg {

struct KeyPrices {
  double p_rstar = 0.0;
  double p_sstar = 0.0;
  double p_tilde = 0.0;
  double p_rind = 0.0;  // unclamped, may exceed 1
  double p_sind = 0.0;  // unclamped, may exceed 1
  std::optional<double> p_dagger;
};

/// Maximizer of (p - c) q(p); also the seller's optimum with effective cost c_s / (1 - α).
inline double cost_opt_price(const DemandCurve& curve, double c) {
  if (c >= 1.0) return 1.0;
  if (curve.is_linear()) return 0.5 * (1.0 + c);
  auto f = [&](double p) { return (p - c) * curve(p); };
  return num::argmax_unimodal(f, std::max(0.0, c), 1.0);
}

inline double retailer_opt_price(const GameParams& g) { return cost_opt_price(g.curve, g.c_r); }

inline double seller_opt_price(const GameParams& g) {
  if (g.alpha >= 1.0 - g.c_s) return 1.0;
  return cost_opt_price(g.curve, g.c_s / (1.0 - g.alpha));
}

inline double revenue_peak_price(const DemandCurve& curve) { return cost_opt_price(curve, 0.0); }

inline std::pair<double, double> indifference_prices(const GameParams& g) {
  return {g.c_r / (1.0 - g.alpha), g.c_s / (1.0 - g.alpha)};
}

/// Larger root of pi_rs(p) = pi_rr(p_rstar) on [p_tilde, 1], absent when pi_rs never reaches it.
inline std::optional<double> p_dagger(const GameParams& g) {
  double target = pi_rr(g, retailer_opt_price(g));
  double pt = revenue_peak_price(g.curve);
  if (pi_rs(g, pt) < target) return std::nullopt;
  if (g.curve.is_linear()) {
    double disc = std::max(0.0, 1.0 - 4.0 * target / g.alpha);
    return 0.5 * (1.0 + std::sqrt(disc));
  }
  return num::bisect([&](double p) { return pi_rs(g, p) - target; }, pt, 1.0);
}

inline KeyPrices key_prices(const GameParams& g) {
  KeyPrices k;
  k.p_rstar = retailer_opt_price(g);
  k.p_sstar = seller_opt_price(g);
  k.p_tilde = revenue_peak_price(g.curve);
  std::tie(k.p_rind, k.p_sind) = indifference_prices(g);
  k.p_dagger = p_dagger(g);
  return k;
}

}  // namespace srbg
