#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "srbg/equilibrium.hpp"

namespace srbg {

/// Which continuum price the players coordinate on for each fee.
struct StrategyProfile {
  enum class Kind { rho_low, rho_high, custom };
  Kind kind = Kind::rho_low;
  std::vector<std::pair<double, double>> table;  // (alpha, price), sorted by alpha

  static StrategyProfile low() { return {Kind::rho_low, {}}; }
  static StrategyProfile high() { return {Kind::rho_high, {}}; }
  static StrategyProfile custom(std::vector<std::pair<double, double>> t) {
    std::sort(t.begin(), t.end());
    return {Kind::custom, std::move(t)};
  }

  /// Piecewise-linear table value, flat beyond the ends.
  double table_price(double alpha) const {
    if (table.empty()) return 0.0;
    if (alpha <= table.front().first) return table.front().second;
    if (alpha >= table.back().first) return table.back().second;
    auto it = std::upper_bound(table.begin(), table.end(), std::make_pair(alpha, -1e300));
    auto [a1, p1] = *it;
    auto [a0, p0] = *(it - 1);
    return a1 == a0 ? p1 : p0 + (p1 - p0) * (alpha - a0) / (a1 - a0);
  }
};

inline const char* to_string(StrategyProfile::Kind k) {
  switch (k) {
    case StrategyProfile::Kind::rho_low: return "low";
    case StrategyProfile::Kind::rho_high: return "high";
    case StrategyProfile::Kind::custom: return "custom";
  }
  return "";
}

struct EqPayoff {
  double retailer = 0.0;
  double seller = 0.0;
  Outcome outcome;
  bool clamped = false;  // a custom table price was moved into the continuum interval
};

inline EqPayoff eq_payoffs(const Landscape& l, const StrategyProfile& rho, double tol = interval_tol) {
  const GameParams& g = l.g;
  auto rows = refined_outcomes(l, tol);
  EqPayoff e;
  const Outcome* pick = rows.empty() ? nullptr : &rows.front();
  for (const auto& o : rows)
    if (o.label == OutcomeLabel::continuum_s) pick = &o;
  if (!pick) return e;
  e.outcome = *pick;
  double p = pick->price_lo;
  if (pick->label == OutcomeLabel::continuum_s) {
    switch (rho.kind) {
      case StrategyProfile::Kind::rho_low: p = pick->price_lo; break;
      case StrategyProfile::Kind::rho_high: p = pick->price_hi; break;
      case StrategyProfile::Kind::custom: {
        double want = rho.table_price(g.alpha);
        p = std::clamp(want, pick->price_lo, pick->price_hi);
        e.clamped = std::abs(p - want) > tol;
        break;
      }
    }
    e.outcome.price_lo = e.outcome.price_hi = p;
  }
  if (pick->fulfiller == Fulfiller::retailer) {
    e.retailer = pi_rr(g, p);
    e.seller = 0.0;
  } else {
    e.retailer = pi_rs(g, p);
    e.seller = pi_ss(g, p);
  }
  return e;
}

inline EqPayoff eq_payoffs(const GameParams& g, const StrategyProfile& rho) { return eq_payoffs(landscape(g), rho); }

/// Evaluates equilibrium payoffs over many fees for fixed costs.
class FeeGame {
 public:
  explicit FeeGame(Costs c) : costs_(std::move(c)), fees_(threshold_fees(costs_)) {}

  const Costs& costs() const { return costs_; }
  const ThresholdFees& fees() const { return fees_; }
  Landscape at(double alpha) const { return landscape(at_alpha(costs_, alpha), fees_); }
  EqPayoff payoffs(double alpha, const StrategyProfile& rho) const { return eq_payoffs(at(alpha), rho); }
  double target() const { return (fees_.p_rstar - costs_.c_r) * costs_.curve(fees_.p_rstar); }

  /// α ↦ pi_rs(p_sstar(α), α), the retailer's referral income at the seller's optimal price.
  double referral_at_sstar(double alpha) const {
    GameParams g = at_alpha(costs_, alpha);
    return pi_rs(g, seller_opt_price(g));
  }

 private:
  Costs costs_;
  ThresholdFees fees_;
};

namespace detail {

// Smallest maximizer of f over [lo, hi]: n-point sweep, then golden section on the
// neighbouring cells. Earlier cells win ties within 1e-12.
template <class F>
std::pair<double, double> sweep_argmax(F&& f, double lo, double hi, std::size_t n) {
  auto xs = num::linspace(lo, hi, n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = f(xs[i]);
  std::size_t i = num::first_argmax(ys);
  double a = xs[i > 0 ? i - 1 : 0], b = xs[std::min(i + 1, n - 1)];
  double x = num::golden_max(f, a, b);
  double fx = f(x);
  if (fx > ys[i] + 1e-12) return {x, fx};
  return {xs[i], ys[i]};
}

}  // namespace detail

struct AlphaBar {
  double alpha = 0.0;
  double value = 0.0;  // pi_rs(p_sstar(ᾱ), ᾱ)
  bool exceeds = false;  // some α has pi_rs(p_sstar, α) > pi_rr(p_rstar)
};

inline AlphaBar alpha_bar(const FeeGame& fg, std::size_t n = 10000) {
  double hi = 1.0 - fg.costs().c_s;
  auto [a, v] = detail::sweep_argmax([&](double x) { return fg.referral_at_sstar(x); }, 0.0, hi, n);
  return {a, v, v > fg.target()};
}

struct FeeGameSolution {
  double alpha_star = 0.0;
  double retailer_payoff = 0.0;
  double seller_payoff = 0.0;
  Outcome outcome;
  std::optional<double> alpha_bar;
};

/// Dense sweep of the retailer's equilibrium payoff over (0,1) with golden refinement.
inline std::pair<double, double> alpha_star_sweep(const FeeGame& fg, const StrategyProfile& rho, std::size_t n = 10000) {
  const double eps = 1e-9;
  return detail::sweep_argmax([&](double a) { return fg.payoffs(a, rho).retailer; }, eps, 1.0 - eps, n);
}

inline FeeGameSolution solution_at(const FeeGame& fg, const StrategyProfile& rho, double a) {
  auto e = fg.payoffs(a, rho);
  return {a, e.retailer, e.seller, e.outcome, std::nullopt};
}

inline constexpr std::uint64_t custom_check_seed = 20240611;

/// Smallest fee maximizing the retailer's equilibrium payoff under rho.
/// For rho_low the candidates are α_rstar and the best fee of the (p_sstar, s) region;
/// for rho_high, ᾱ when referral income at p_sstar can beat pi_rr(p_rstar), else the
/// start of the continuum.
inline FeeGameSolution alpha_star(const FeeGame& fg, const StrategyProfile& rho) {
  const auto& t = fg.fees();
  AlphaBar ab = alpha_bar(fg);
  std::optional<double> abar = ab.exceeds ? std::optional<double>(ab.alpha) : std::nullopt;
  FeeGameSolution s;
  switch (rho.kind) {
    case StrategyProfile::Kind::rho_low: {
      s = solution_at(fg, rho, t.alpha_rstar);
      bool has_sstar_region = fg.costs().c_s <= t.c_sstar && t.alpha_opt > std::max(t.alpha_sstar, 0.0);
      if (has_sstar_region) {
        auto [a, v] = detail::sweep_argmax([&](double x) { return fg.referral_at_sstar(x); },
                                           std::max(t.alpha_sstar, 1e-9), t.alpha_opt, 2000);
        if (v >= s.retailer_payoff - 1e-12) s = solution_at(fg, rho, a);
      }
      break;
    }
    case StrategyProfile::Kind::rho_high:
      s = solution_at(fg, rho, ab.exceeds ? ab.alpha : std::max(t.alpha_rdagger, t.alpha_opt));
      break;
    case StrategyProfile::Kind::custom: {
      auto [a, v] = alpha_star_sweep(fg, rho);
      // spot check against random fees; a table with narrow spikes can beat the sweep
      std::mt19937_64 rng(custom_check_seed);
      std::uniform_real_distribution<double> U(1e-9, 1.0 - 1e-9);
      for (int i = 0; i < 100; ++i) {
        double x = U(rng);
        double y = fg.payoffs(x, rho).retailer;
        if (y > v + 1e-12) {
          a = x;
          v = y;
        }
      }
      s = solution_at(fg, rho, a);
      break;
    }
  }
  s.alpha_bar = abar;
  return s;
}

struct PayoffBounds {
  Interval retailer;
  Interval seller;
  Interval alpha;
};

/// Payoff and fee bounds over all continuum selections, as stated for the fee game.
inline PayoffBounds payoff_bounds(const FeeGame& fg) {
  const auto& t = fg.fees();
  const auto& c = fg.costs();
  AlphaBar ab = alpha_bar(fg);
  GameParams at_r = at_alpha(c, t.alpha_rstar);
  double hi_r = pi_rs(at_r, t.p_rstar);
  double lo_r = ab.exceeds ? ab.value : fg.target();
  double a_lo = std::min(t.alpha_sstar, t.alpha_rdagger);
  GameParams at_lo = at_alpha(c, a_lo);
  return {{lo_r, hi_r}, {0.0, pi_ss(at_lo, seller_opt_price(at_lo))}, {a_lo, t.alpha_sdagger}};
}

}  // namespace srbg
