#pragma once

#include <string>
#include <utility>

#include "srbg/demand.hpp"

namespace srbg {

/// Costs and demand, everything except the fee.
struct Costs {
  double c_r = 0.6;
  double c_s = 0.4;
  double beta = 0.5;
  DemandCurve curve;
};

struct GameParams {
  double c_r = 0.6;
  double c_s = 0.4;
  double alpha = 0.2;
  double beta = 0.5;
  DemandCurve curve;

  Costs costs() const { return {c_r, c_s, beta, curve}; }
};

/// Any fee, including values outside (0,1) used internally (e.g. a negative α_s*).
inline GameParams at_alpha(const Costs& c, double alpha) { return {c.c_r, c.c_s, alpha, c.beta, c.curve}; }

inline void validate_costs(double c_r, double c_s) {
  if (!(c_s > 0.0)) throw ConfigError("0 < c_s violated");
  if (!(c_r < 1.0)) throw ConfigError("c_r < 1 violated");
  if (!(c_s < c_r)) throw ConfigError("c_s < c_r violated");
}

inline void validate(const Costs& c) {
  validate_costs(c.c_r, c.c_s);
  if (!(c.beta >= 0.0 && c.beta <= 1.0)) throw ConfigError("beta in [0,1] violated");
}

inline void validate(const GameParams& g) {
  validate(g.costs());
  if (!(g.alpha > 0.0 && g.alpha < 1.0)) throw ConfigError("alpha in (0,1) violated");
}

inline GameParams make_params(double c_r, double c_s, double alpha, double beta = 0.5,
                              DemandCurve curve = DemandCurve::linear()) {
  GameParams g{c_r, c_s, alpha, beta, std::move(curve)};
  validate(g);
  return g;
}

inline double pi_rr(const GameParams& g, double p) { return (p - g.c_r) * g.curve(p); }
inline double pi_rs(const GameParams& g, double p) { return g.alpha * p * g.curve(p); }
inline double pi_ss(const GameParams& g, double p) { return ((1.0 - g.alpha) * p - g.c_s) * g.curve(p); }

struct Payoffs {
  double retailer = 0.0;
  double seller = 0.0;
};

/// Lower price takes the market; a tie gives the retailer a β share of demand.
inline Payoffs joint_payoffs(const GameParams& g, double p_r, double p_s) {
  if (p_r < p_s) return {pi_rr(g, p_r), 0.0};
  if (p_r > p_s) return {pi_rs(g, p_s), pi_ss(g, p_s)};
  double b = g.beta;
  return {b * pi_rr(g, p_r) + (1.0 - b) * pi_rs(g, p_r), (1.0 - b) * pi_ss(g, p_s)};
}

}  // namespace srbg
