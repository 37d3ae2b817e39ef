#pragma once

// Analytic results against the grid oracle.

#include <string>
#include <vector>

#include "srbg/equilibrium.hpp"
#include "srbg/oracle.hpp"

namespace srbg::verify {

enum class Status { agree, ambiguous, disagree };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::agree: return "agree";
    case Status::ambiguous: return "ambiguous";
    case Status::disagree: return "disagree";
  }
  return "";
}

/// Price resolution of the oracle: three grid cells.
inline double price_tau(const oracle::GridSpec& grid) { return 3.0 * grid.h(); }

/// Smallest gap between key-price pairs whose order decides a table row. When it is
/// below the grid resolution the oracle cannot tell the rows apart.
inline double guard_margin(const Landscape& l) {
  const auto& k = l.k;
  double pd = l.dagger();
  double m = 1e300;
  auto gap = [&](double a, double b) { m = std::min(m, std::abs(a - b)); };
  gap(k.p_rind, k.p_sstar);
  gap(k.p_sstar, k.p_rstar);
  gap(k.p_rind, k.p_rstar);
  gap(k.p_sind, k.p_rstar);
  if (k.p_dagger) {
    gap(k.p_sind, pd);
    gap(k.p_sstar, pd);
  }
  gap(k.p_sind, 1.0);
  gap(k.p_sstar, 1.0);
  return m;
}

struct Check {
  double p_r = 0.0, p_s = 0.0;
  oracle::TieAs tie = oracle::TieAs::split;
  bool expect_nash = true;
  bool oracle_nash = true;
  Status status = Status::agree;
  std::string what;
};

struct FamilyReport {
  std::vector<Check> checks;
  std::size_t disagreements = 0;
  std::size_t ambiguous = 0;
};

/// Confirms sampled points of every analytic family and rejects midpoints of the gaps
/// between them along the lines the families live on.
inline FamilyReport check_families(const Landscape& l, const oracle::GridSpec& grid, std::size_t samples = 11) {
  FamilyReport rep;
  const double tau = price_tau(grid);
  const auto& k = l.k;
  auto run = [&](double pr, double ps, oracle::TieAs tie, bool expect, double dist, std::string what) {
    Check c{pr, ps, tie, expect, oracle::grid_is_nash(l.g, pr, ps, grid, tie).ok, Status::agree, std::move(what)};
    if (c.oracle_nash != expect) {
      c.status = (!expect && dist <= tau) ? Status::ambiguous : Status::disagree;
      (c.status == Status::ambiguous ? rep.ambiguous : rep.disagreements)++;
    }
    rep.checks.push_back(c);
  };

  auto fams = nash_set(l);
  std::vector<Interval> shared;
  std::optional<Interval> r_line, s_line;
  for (const auto& f : fams) {
    for (std::size_t i = 0; i < samples; ++i) {
      double t = samples == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(samples - 1);
      auto [pr, ps] = f.point(t);
      auto tie = f.kind == Family::Kind::shared_seller || pr == ps ? oracle::TieAs::seller : oracle::TieAs::split;
      run(pr, ps, tie, true, 0.0, std::string("family ") + to_string(f.kind));
    }
    if (f.kind == Family::Kind::shared_seller) shared.push_back({f.lo, f.hi});
    if (f.kind == Family::Kind::retailer_fixed) r_line = Interval{f.lo, f.hi};
    if (f.kind == Family::Kind::seller_fixed) s_line = Interval{f.lo, f.hi};
  }

  // shared prices with the seller serving: gaps of the union of intervals
  std::sort(shared.begin(), shared.end(), [](auto& a, auto& b) { return a.lo < b.lo; });
  double cur = 0.0;
  auto gap_mid = [&](double a, double b, oracle::TieAs tie, std::string what) {
    if (b - a <= 1e-12) return;
    double m = 0.5 * (a + b);
    run(m, m, tie, false, 0.5 * (b - a), std::move(what));
  };
  for (const auto& iv : shared) {
    gap_mid(cur, iv.lo, oracle::TieAs::seller, "shared gap");
    cur = std::max(cur, iv.hi);
  }
  gap_mid(cur, 1.0, oracle::TieAs::seller, "shared gap");

  // shared prices with the retailer serving never form an equilibrium
  for (double p : {0.125, 0.375, 0.625, 0.875}) {
    run(p, p, oracle::TieAs::retailer, false, std::abs(k.p_rind - k.p_sind), "retailer shared");
  }

  // retailer at p_rstar, seller above
  if (k.p_rstar < 1.0) {
    double end = r_line ? std::max(r_line->lo, k.p_rstar) : 1.0;
    if (end - k.p_rstar > 1e-12) {
      double m = 0.5 * (k.p_rstar + end);
      run(k.p_rstar, m, oracle::TieAs::split, false, 0.5 * (end - k.p_rstar), "retailer-fixed gap");
    }
  }
  // seller at p_sstar, retailer above
  if (k.p_sstar < 1.0 && !s_line) {
    double m = 0.5 * (k.p_sstar + 1.0);
    run(m, k.p_sstar, oracle::TieAs::split, false, guard_margin(l), "seller-fixed line");
  }
  return rep;
}

struct CellReport {
  double alpha = 0.0;
  Status status = Status::agree;
  std::vector<Outcome> analytic;
  std::vector<oracle::GridOutcome> oracle;
  double margin = 0.0;
  std::string reason;
  double grid_rstar = 0.0;  // grid maximizers of pi_rr and pi_ss, from the oracle's tables
  double grid_sstar = 0.0;
};

namespace detail {

inline Fulfiller as_fulfiller(oracle::Who w) { return w == oracle::Who::retailer ? Fulfiller::retailer : Fulfiller::seller; }

// Oracle outcomes sit inside the analytic intervals and cover each of them, within tau.
inline std::string compare(const std::vector<Outcome>& an, const std::vector<oracle::GridOutcome>& orc, double tau) {
  for (const auto& o : orc) {
    if (o.who == oracle::Who::split) return "split-demand outcome";
    bool inside = false;
    for (const auto& a : an)
      if (a.fulfiller == as_fulfiller(o.who) && o.price >= a.price_lo - tau && o.price <= a.price_hi + tau) inside = true;
    if (!inside) return "oracle outcome outside analytic set";
  }
  for (const auto& a : an) {
    std::vector<double> ps;
    for (const auto& o : orc)
      if (a.fulfiller == as_fulfiller(o.who) && o.price >= a.price_lo - tau && o.price <= a.price_hi + tau)
        ps.push_back(o.price);
    if (ps.empty()) return "analytic outcome missing from oracle";
    std::sort(ps.begin(), ps.end());
    if (ps.front() > a.price_lo + tau || ps.back() < a.price_hi - tau) return "analytic interval not covered";
    for (std::size_t i = 1; i < ps.size(); ++i)
      if (ps[i] - ps[i - 1] > tau) return "hole in covered interval";
  }
  return {};
}

}  // namespace detail

/// Oracle-refined outcomes against the analytic outcome rows at one fee.
inline CellReport verify_cell(const Costs& c, const ThresholdFees& claimed, double alpha, const oracle::GridSpec& grid) {
  GameParams g = at_alpha(c, alpha);
  Landscape l = landscape(g, claimed);
  Landscape truth = landscape(g);
  CellReport cell;
  cell.alpha = alpha;
  cell.analytic = refined_outcomes(l);
  oracle::GridGame gg(g, grid);
  auto scan = oracle::grid_equilibrium_scan(gg, true);
  cell.oracle = oracle::refined_grid_outcomes(gg, scan);
  cell.grid_rstar = gg.x[num::first_argmax(gg.rr)];
  cell.grid_sstar = gg.x[num::first_argmax(gg.ss)];
  cell.margin = guard_margin(truth);
  cell.reason = detail::compare(cell.analytic, cell.oracle, price_tau(grid));
  if (!cell.reason.empty()) cell.status = cell.margin <= price_tau(grid) ? Status::ambiguous : Status::disagree;
  return cell;
}

struct Boundary {
  double alpha = 0.0;        // midpoint between the cells where the oracle's outcome type changes
  double nearest_fee = 0.0;  // closest claimed threshold fee
  std::string nearest_name;
};

struct SweepReport {
  std::vector<CellReport> cells;
  std::size_t disagreements = 0;
  std::size_t ambiguous = 0;
  std::vector<Boundary> boundaries;
};

namespace detail {

// Outcome type seen by the oracle: who serves, whether seller prices form a range, whether
// a seller point sits at the seller's own optimum and whether a range starts at the
// retailer's own optimum.
inline std::string signature(const CellReport& cell, double tau) {
  bool s = false, r = false;
  double lo = 1e300, hi = -1e300;
  for (const auto& o : cell.oracle) {
    if (o.who == oracle::Who::retailer) r = true;
    if (o.who == oracle::Who::seller) {
      s = true;
      lo = std::min(lo, o.price);
      hi = std::max(hi, o.price);
    }
  }
  std::string sig = r ? "r" : "";
  if (!s) return sig;
  if (hi - lo > tau) return sig + (std::abs(lo - cell.grid_rstar) <= tau ? "S*" : "S");
  return sig + (std::abs(lo - cell.grid_sstar) <= tau ? "s*" : "s");
}

}  // namespace detail

inline SweepReport sweep_verify(const Costs& c, const std::vector<double>& alphas, const oracle::GridSpec& grid,
                                double perturb_fee = 0.0) {
  ThresholdFees claimed = perturbed(threshold_fees(c), perturb_fee);
  SweepReport rep;
  const double tau = price_tau(grid);
  std::string prev;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    auto cell = verify_cell(c, claimed, alphas[i], grid);
    if (cell.status == Status::disagree) ++rep.disagreements;
    if (cell.status == Status::ambiguous) ++rep.ambiguous;
    std::string sig = detail::signature(cell, tau);
    if (i > 0 && sig != prev) {
      Boundary b{0.5 * (alphas[i - 1] + alphas[i]), 0.0, ""};
      double best = 1e300;
      const std::pair<const char*, double> fees[] = {{"alpha_sstar", claimed.alpha_sstar},
                                                     {"alpha_opt", claimed.alpha_opt},
                                                     {"alpha_rdagger", claimed.alpha_rdagger},
                                                     {"alpha_rstar", claimed.alpha_rstar},
                                                     {"alpha_sdagger", claimed.alpha_sdagger}};
      for (auto [name, v] : fees)
        if (std::abs(v - b.alpha) < best) {
          best = std::abs(v - b.alpha);
          b.nearest_fee = v;
          b.nearest_name = name;
        }
      rep.boundaries.push_back(b);
    }
    prev = sig;
    rep.cells.push_back(std::move(cell));
  }
  return rep;
}

}  // namespace srbg::verify
