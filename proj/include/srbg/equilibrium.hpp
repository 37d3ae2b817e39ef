#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "srbg/fees.hpp"

namespace srbg {

enum class Fulfiller { retailer, seller };

/// How a profile with equal prices splits demand.
enum class Tie { seller, retailer, split };

enum class Refinement { unrefined, admissible, admissible_pareto };

struct Family {
  enum class Kind { shared_seller, retailer_fixed, seller_fixed };
  Kind kind = Kind::shared_seller;
  double fixed = 0.0;  // the fixed player's price; unused for shared_seller
  double lo = 0.0;     // range of the free price (or of the shared price)
  double hi = 0.0;
  Refinement status = Refinement::unrefined;

  static Family shared(double lo, double hi) { return {Kind::shared_seller, 0.0, lo, hi}; }
  static Family retailer_fixed(double p_r, double lo, double hi) { return {Kind::retailer_fixed, p_r, lo, hi}; }
  static Family seller_fixed(double p_s, double lo, double hi) { return {Kind::seller_fixed, p_s, lo, hi}; }

  /// Price profile at parameter t in [0,1] along the family.
  std::pair<double, double> point(double t) const {
    double x = lo + t * (hi - lo);
    switch (kind) {
      case Kind::shared_seller: return {x, x};
      case Kind::retailer_fixed: return {fixed, x};
      case Kind::seller_fixed: return {x, fixed};
    }
    return {x, x};
  }
};

enum class OutcomeLabel { prind_s, psstar_s, continuum_s, prstar_r, unlabeled };

inline const char* to_string(OutcomeLabel l) {
  switch (l) {
    case OutcomeLabel::prind_s: return "prind_s";
    case OutcomeLabel::psstar_s: return "psstar_s";
    case OutcomeLabel::continuum_s: return "continuum_s";
    case OutcomeLabel::prstar_r: return "prstar_r";
    case OutcomeLabel::unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

inline const char* to_string(Fulfiller f) { return f == Fulfiller::seller ? "seller" : "retailer"; }

inline const char* to_string(Family::Kind k) {
  switch (k) {
    case Family::Kind::shared_seller: return "shared_seller";
    case Family::Kind::retailer_fixed: return "retailer_fixed";
    case Family::Kind::seller_fixed: return "seller_fixed";
  }
  return "";
}

inline const char* to_string(Refinement r) {
  switch (r) {
    case Refinement::unrefined: return "unrefined";
    case Refinement::admissible: return "admissible";
    case Refinement::admissible_pareto: return "admissible_pareto";
  }
  return "";
}

struct Outcome {
  double price_lo = 0.0;
  double price_hi = 0.0;
  Fulfiller fulfiller = Fulfiller::seller;
  OutcomeLabel label = OutcomeLabel::unlabeled;
};

inline constexpr double interval_tol = 1e-9;

/// Everything the equilibrium tables read, computed once per parameter set.
struct Landscape {
  GameParams g;
  KeyPrices k;
  ThresholdFees t;
  double target = 0.0;  // pi_rr(p_rstar)
  bool case_i = true;

  double dagger() const { return k.p_dagger.value_or(k.p_rstar); }
  /// p_sstar <= p_dagger, decided on payoffs to avoid the root when it is absent.
  bool sstar_below_dagger(double tol) const { return pi_rs(g, std::min(k.p_sstar, 1.0)) >= target - tol; }
  bool dagger_below_sstar(double tol) const {
    return k.p_dagger.has_value() && pi_rs(g, std::min(k.p_sstar, 1.0)) <= target + tol;
  }
};

inline Landscape landscape(const GameParams& g, const ThresholdFees& t) {
  Landscape l{g, key_prices(g), t, 0.0, true};
  l.target = pi_rr(g, l.k.p_rstar);
  l.case_i = g.c_s <= t.c_sstar;
  return l;
}

inline Landscape landscape(const GameParams& g) { return landscape(g, threshold_fees(g.costs())); }

struct NashCheck {
  bool ok = true;
  double retailer_gain = 0.0;
  double seller_gain = 0.0;
  std::vector<std::string> violated;
};

/// Current payoffs of a profile; equal prices follow `tie`.
inline Payoffs profile_payoffs(const GameParams& g, double p_r, double p_s, Tie tie) {
  if (p_r != p_s || tie == Tie::split) return joint_payoffs(g, p_r, p_s);
  if (tie == Tie::seller) return {pi_rs(g, p_s), pi_ss(g, p_s)};
  return {pi_rr(g, p_r), 0.0};
}

/// Nash test through best-deviation suprema: undercutting a price o is worth
/// pi(min(p_opt, o)) by unimodality, pricing above o is worth the referral side.
inline NashCheck is_nash(const Landscape& l, double p_r, double p_s, Tie tie = Tie::seller, double tol = interval_tol) {
  const GameParams& g = l.g;
  if (p_r < 0.0 || p_r > 1.0 || p_s < 0.0 || p_s > 1.0) throw OutOfDomain("profile outside [0,1]^2");
  NashCheck r;
  Payoffs cur = profile_payoffs(g, p_r, p_s, tie);
  const double b = g.beta;

  double under_r = p_s > 0.0 ? pi_rr(g, std::min(l.k.p_rstar, p_s)) : -1e300;
  double above_r = p_s < 1.0 ? pi_rs(g, p_s) : -1e300;
  double tie_r = p_r != p_s ? b * pi_rr(g, p_s) + (1.0 - b) * pi_rs(g, p_s) : -1e300;
  double best_r = std::max({under_r, above_r, tie_r});
  r.retailer_gain = best_r - cur.retailer;
  if (r.retailer_gain > tol) {
    r.ok = false;
    r.violated.push_back(best_r == under_r ? "retailer undercut" : best_r == above_r ? "retailer raise" : "retailer tie");
  }

  double ps_opt = std::min(l.k.p_sstar, 1.0);
  double under_s = p_r > 0.0 ? pi_ss(g, std::min(ps_opt, p_r)) : -1e300;
  double above_s = p_r < 1.0 ? 0.0 : -1e300;
  double tie_s = p_r != p_s ? (1.0 - b) * pi_ss(g, p_r) : -1e300;
  double best_s = std::max({under_s, above_s, tie_s});
  r.seller_gain = best_s - cur.seller;
  if (r.seller_gain > tol) {
    r.ok = false;
    r.violated.push_back(best_s == under_s ? "seller undercut" : best_s == above_s ? "seller raise" : "seller tie");
  }
  return r;
}

inline NashCheck is_nash(const GameParams& g, double p_r, double p_s, Tie tie = Tie::seller) {
  return is_nash(landscape(g), p_r, p_s, tie);
}

namespace detail {

inline bool same(const Family& a, const Family& b, double tol) {
  return a.kind == b.kind && std::abs(a.fixed - b.fixed) <= tol && std::abs(a.lo - b.lo) <= tol &&
         std::abs(a.hi - b.hi) <= tol;
}

inline void push(std::vector<Family>& out, Family f, double tol) {
  f.hi = std::min(f.hi, 1.0);
  if (f.lo > f.hi + 1e-12) return;
  if (f.hi < f.lo) f.hi = f.lo;
  for (auto& e : out)
    if (same(e, f, tol)) return;
  out.push_back(f);
}

}  // namespace detail

/// Unrefined equilibrium families: the union of every table row whose closed guard holds.
inline std::vector<Family> nash_set(const Landscape& l, double tol = interval_tol) {
  const auto& k = l.k;
  const auto& t = l.t;
  const double a = l.g.alpha;
  auto le = [tol](double x, double y) { return num::le(x, y, tol); };
  std::vector<Family> out;
  auto seller_rows = [&] {
    detail::push(out, Family::seller_fixed(k.p_sstar, k.p_sstar, 1.0), tol);
    detail::push(out, Family::shared(k.p_sind, k.p_sstar), tol);
  };
  if (l.case_i) {
    if (le(a, t.alpha_sstar)) detail::push(out, Family::shared(k.p_sind, k.p_rind), tol);
    if (le(t.alpha_sstar, a) && le(a, t.alpha_opt)) seller_rows();
    if (le(t.alpha_opt, a) && le(a, t.alpha_sdagger)) {
      if (l.sstar_below_dagger(tol)) seller_rows();
      if (l.dagger_below_sstar(tol)) detail::push(out, Family::shared(k.p_sind, l.dagger()), tol);
    }
  } else {
    if (le(a, t.alpha_rdagger)) detail::push(out, Family::shared(k.p_sind, k.p_rind), tol);
    if (le(t.alpha_rdagger, a) && le(a, t.alpha_sdagger)) {
      if (l.sstar_below_dagger(tol)) seller_rows();
      if (l.dagger_below_sstar(tol)) detail::push(out, Family::shared(k.p_sind, l.dagger()), tol);
    }
  }
  if (le(t.alpha_rstar, a)) detail::push(out, Family::retailer_fixed(k.p_rstar, l.dagger(), 1.0), tol);
  return out;
}

inline std::vector<Family> nash_set(const GameParams& g) { return nash_set(landscape(g)); }

struct Interval {
  double lo, hi;
};

/// Weakly undominated prices: retailer between p_rind and p_rstar, seller in [p_sind, p_sstar]
/// (only p_s = 1 once the seller cannot break even).
inline std::pair<Interval, Interval> admissible_prices(const Landscape& l) {
  const auto& k = l.k;
  Interval r{std::min(k.p_rind, k.p_rstar), std::min(1.0, std::max(k.p_rind, k.p_rstar))};
  Interval s = k.p_sind < 1.0 ? Interval{k.p_sind, k.p_sstar} : Interval{1.0, 1.0};
  return {r, s};
}

inline std::vector<Family> admissible_set(const Landscape& l, double tol = interval_tol) {
  auto [R, S] = admissible_prices(l);
  auto in = [tol](double x, Interval i) { return x >= i.lo - tol && x <= i.hi + tol; };
  auto clip = [tol](Family f, Interval i, std::vector<Family>& out) {
    f.lo = std::max(f.lo, i.lo);
    f.hi = std::min(f.hi, i.hi);
    if (f.lo > f.hi + tol) return;
    if (f.hi < f.lo) f.hi = f.lo;
    f.status = Refinement::admissible;
    out.push_back(f);
  };
  std::vector<Family> out;
  for (const auto& f : nash_set(l, tol)) {
    switch (f.kind) {
      case Family::Kind::shared_seller:
        clip(f, Interval{std::max(R.lo, S.lo), std::min(R.hi, S.hi)}, out);
        break;
      case Family::Kind::retailer_fixed:
        if (in(f.fixed, R)) clip(f, S, out);
        break;
      case Family::Kind::seller_fixed:
        if (in(f.fixed, S)) clip(f, R, out);
        break;
    }
  }
  return out;
}

inline std::vector<Family> admissible_set(const GameParams& g) { return admissible_set(landscape(g)); }

/// Drops the retailer-fulfilled family (p_rstar, [p_dagger, p_sstar]) that the shared price
/// p_dagger improves on for the seller at equal retailer payoff.
inline std::vector<Family> pareto_refine(const Landscape& l, std::vector<Family> fams, double tol = interval_tol) {
  const double a = l.g.alpha;
  bool drop = num::le(l.t.alpha_rstar, a, tol) && a < l.t.alpha_sdagger - tol && l.dagger_below_sstar(tol);
  std::vector<Family> out;
  for (auto f : fams) {
    if (drop && f.kind == Family::Kind::retailer_fixed) continue;
    f.status = Refinement::admissible_pareto;
    out.push_back(f);
  }
  return out;
}

inline std::vector<Family> refined_families(const Landscape& l, double tol = interval_tol) {
  return pareto_refine(l, admissible_set(l, tol), tol);
}

/// Outcome rows; at a boundary fee every row whose closed guard holds is returned.
inline std::vector<Outcome> refined_outcomes(const Landscape& l, double tol = interval_tol) {
  const auto& k = l.k;
  const auto& t = l.t;
  const double a = l.g.alpha;
  auto le = [tol](double x, double y) { return num::le(x, y, tol); };
  std::vector<Outcome> out;
  auto point = [&](double p, Fulfiller f, OutcomeLabel lab) { out.push_back({p, p, f, lab}); };
  auto continuum = [&] {
    double lo = std::max(k.p_rstar, k.p_sind);
    double hi = std::min(k.p_sstar, l.dagger());
    if (lo > hi + tol) return;
    out.push_back({lo, std::max(lo, hi), Fulfiller::seller, OutcomeLabel::continuum_s});
  };
  if (l.case_i) {
    if (le(a, t.alpha_sstar)) point(k.p_rind, Fulfiller::seller, OutcomeLabel::prind_s);
    if (le(t.alpha_sstar, a) && le(a, t.alpha_opt)) point(k.p_sstar, Fulfiller::seller, OutcomeLabel::psstar_s);
    if (le(t.alpha_opt, a) && le(a, t.alpha_sdagger)) continuum();
  } else {
    if (le(a, t.alpha_rdagger)) point(k.p_rind, Fulfiller::seller, OutcomeLabel::prind_s);
    if (le(t.alpha_rdagger, a) && le(a, t.alpha_sdagger)) continuum();
  }
  if (le(t.alpha_sdagger, a)) point(k.p_rstar, Fulfiller::retailer, OutcomeLabel::prstar_r);
  return out;
}

inline std::vector<Outcome> refined_outcomes(const GameParams& g) { return refined_outcomes(landscape(g)); }

/// Transaction price and fulfiller of each family, merged per fulfiller.
inline std::vector<Outcome> collapse(const std::vector<Family>& fams, double tol = interval_tol) {
  std::vector<Outcome> raw;
  for (const auto& f : fams) {
    switch (f.kind) {
      case Family::Kind::shared_seller: raw.push_back({f.lo, f.hi, Fulfiller::seller}); break;
      case Family::Kind::seller_fixed: raw.push_back({f.fixed, f.fixed, Fulfiller::seller}); break;
      case Family::Kind::retailer_fixed: raw.push_back({f.fixed, f.fixed, Fulfiller::retailer}); break;
    }
  }
  std::sort(raw.begin(), raw.end(), [](const Outcome& x, const Outcome& y) {
    if (x.fulfiller != y.fulfiller) return x.fulfiller < y.fulfiller;
    return x.price_lo < y.price_lo;
  });
  std::vector<Outcome> out;
  for (const auto& o : raw) {
    if (!out.empty() && out.back().fulfiller == o.fulfiller && o.price_lo <= out.back().price_hi + tol) {
      out.back().price_hi = std::max(out.back().price_hi, o.price_hi);
      continue;
    }
    out.push_back(o);
  }
  return out;
}

}  // namespace srbg
