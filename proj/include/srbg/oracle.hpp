#pragma once

// Brute-force checks on a price grid. Uses only the payoff functions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "srbg/payoff.hpp"

namespace srbg::oracle {

struct GridSpec {
  std::size_t n = 2001;
  double slack = 1e-9;

  double h() const { return 1.0 / static_cast<double>(n - 1); }
  double x(std::size_t i) const { return static_cast<double>(i) * h(); }
};

inline constexpr double micro = 1e-12;  // size of the infinitesimal undercut

/// How equal prices split demand when the profile is evaluated.
enum class TieAs { seller, retailer, split };

enum class Who : std::uint8_t { retailer, seller, split };

struct GridCheck {
  bool ok = true;
  double retailer_gain = 0.0;
  double seller_gain = 0.0;
};

namespace detail {

inline Payoffs current(const GameParams& g, double p_r, double p_s, TieAs tie) {
  if (p_r != p_s || tie == TieAs::split) return joint_payoffs(g, p_r, p_s);
  if (tie == TieAs::seller) return {pi_rs(g, p_s), pi_ss(g, p_s)};
  return {pi_rr(g, p_r), 0.0};
}

template <class F>
void for_each_candidate(const GridSpec& grid, double own, double opp, F&& f) {
  for (std::size_t i = 0; i < grid.n; ++i) {
    double x = grid.x(i);
    if (x != own) f(x);
  }
  for (double x : {opp, opp - micro, opp - grid.h(), opp + micro})
    if (x >= 0.0 && x <= 1.0 && x != own) f(x);
}

}  // namespace detail

/// No grid deviation (plus the tie, a one-cell and an infinitesimal undercut of the
/// opponent, and an infinitesimal raise) improves either player's payoff by more than slack.
inline GridCheck grid_is_nash(const GameParams& g, double p_r, double p_s, const GridSpec& grid = {},
                              TieAs tie = TieAs::split) {
  Payoffs cur = detail::current(g, p_r, p_s, tie);
  double best_r = cur.retailer, best_s = cur.seller;
  detail::for_each_candidate(grid, p_r, p_s, [&](double x) { best_r = std::max(best_r, joint_payoffs(g, x, p_s).retailer); });
  detail::for_each_candidate(grid, p_s, p_r, [&](double x) { best_s = std::max(best_s, joint_payoffs(g, p_r, x).seller); });
  GridCheck r;
  r.retailer_gain = best_r - cur.retailer;
  r.seller_gain = best_s - cur.seller;
  r.ok = r.retailer_gain <= grid.slack && r.seller_gain <= grid.slack;
  return r;
}

/// A grid profile. Equal indices carry the tie rule that was tested.
struct Profile {
  std::uint32_t i_r = 0;
  std::uint32_t i_s = 0;
  TieAs tie = TieAs::split;

  bool operator==(const Profile& o) const { return i_r == o.i_r && i_s == o.i_s && (i_r != i_s || tie == o.tie); }
};

/// Payoff tables on the grid, shared by the scan and the refinements.
struct GridGame {
  GameParams g;
  GridSpec grid;
  std::vector<double> x, rr, rs, ss, tie_r, tie_s;
  std::vector<double> best_r, best_r_notie, best_s, best_s_notie;  // indexed by opponent price
  std::vector<double> gap_r;        // rr - rs
  std::vector<char> undercut_r;     // the retailer's best deviation is just below the opponent

  GridGame(GameParams params, GridSpec spec) : g(std::move(params)), grid(spec) {
    const std::size_t n = grid.n;
    x.resize(n);
    rr.resize(n);
    rs.resize(n);
    ss.resize(n);
    tie_r.resize(n);
    tie_s.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = grid.x(i);
      rr[i] = pi_rr(g, x[i]);
      rs[i] = pi_rs(g, x[i]);
      ss[i] = pi_ss(g, x[i]);
      Payoffs t = joint_payoffs(g, x[i], x[i]);
      tie_r[i] = t.retailer;
      tie_s[i] = t.seller;
    }
    // Best deviation against an opponent at x[j]. Any price below x[j] earns the
    // single-fulfiller payoff, any price above earns the other side's, so a running
    // maximum over lower grid points plus the extra candidates equals the full loop.
    best_r.assign(n, -1e300);
    best_r_notie.assign(n, -1e300);
    best_s.assign(n, -1e300);
    best_s_notie.assign(n, -1e300);
    gap_r.resize(n);
    undercut_r.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) gap_r[i] = rr[i] - rs[i];
    double pre_rr = -1e300, pre_ss = -1e300;
    for (std::size_t j = 0; j < n; ++j) {
      double br = pre_rr, bs = pre_ss;
      if (j > 0) {
        double u = pi_rr(g, x[j] - micro);
        undercut_r[j] = u >= pre_rr;
        br = std::max(br, u);
        bs = std::max(bs, pi_ss(g, x[j] - micro));
      }
      if (j + 1 < n) {
        br = std::max(br, rs[j]);
        bs = std::max(bs, 0.0);
      }
      best_r_notie[j] = br;
      best_s_notie[j] = bs;
      best_r[j] = std::max(br, tie_r[j]);
      best_s[j] = std::max(bs, tie_s[j]);
      pre_rr = std::max(pre_rr, rr[j]);
      pre_ss = std::max(pre_ss, ss[j]);
    }
  }

  /// Largest change of v between index i and a neighbouring grid point.
  static double step(const std::vector<double>& v, std::size_t i) {
    double d = 0.0;
    if (i > 0) d = std::max(d, std::abs(v[i] - v[i - 1]));
    if (i + 1 < v.size()) d = std::max(d, std::abs(v[i + 1] - v[i]));
    return d;
  }

  Payoffs payoffs(const Profile& p) const {
    if (p.i_r < p.i_s) return {rr[p.i_r], 0.0};
    if (p.i_r > p.i_s) return {rs[p.i_s], ss[p.i_s]};
    switch (p.tie) {
      case TieAs::seller: return {rs[p.i_s], ss[p.i_s]};
      case TieAs::retailer: return {rr[p.i_r], 0.0};
      case TieAs::split: return {tie_r[p.i_r], tie_s[p.i_s]};
    }
    return {};
  }

  /// Transaction price and who serves demand.
  std::pair<double, Who> outcome(const Profile& p) const {
    if (p.i_r < p.i_s) return {x[p.i_r], Who::retailer};
    if (p.i_r > p.i_s) return {x[p.i_s], Who::seller};
    if (p.tie == TieAs::seller) return {x[p.i_s], Who::seller};
    if (p.tie == TieAs::retailer) return {x[p.i_r], Who::retailer};
    return {x[p.i_r], Who::split};
  }
};

struct Scan {
  std::vector<Profile> profiles;    // strict-price profiles and labeled ties
  std::vector<Profile> split_ties;  // ties under the game's own β
};

/// All grid profiles passing the deviation test. Equal prices are tested three ways:
/// demand to the seller, to the retailer, and split by β.
///
/// With `resolution` set a gain is ignored when it is within the payoffs' one-cell change
/// at the two prices. An equilibrium price between grid points, such as an indifference
/// price, then keeps a neighbour on the grid.
inline Scan grid_equilibrium_scan(const GridGame& gg, bool resolution = false) {
  const std::size_t n = gg.grid.n;
  const double eps = gg.grid.slack;
  // one-cell change of the payoffs the current profile and its best deviation use
  auto tol_r = [&](std::size_t i, std::size_t j, TieAs tie) {
    if (!resolution) return eps;
    bool own = i < j || (i == j && tie == TieAs::retailer);
    if (own) return eps + GridGame::step(gg.rr, i);
    double t = gg.undercut_r[j] ? GridGame::step(gg.gap_r, j) : GridGame::step(gg.rs, j);
    if (i == j && tie == TieAs::split) t += GridGame::step(gg.rr, i);
    return eps + t;
  };
  auto tol_s = [&](std::size_t i, std::size_t j, TieAs tie) {
    if (!resolution) return eps;
    bool own = j < i || (i == j && tie != TieAs::retailer);
    return eps + GridGame::step(gg.ss, own ? j : i);
  };
  Scan s;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      double cur_r = i < j ? gg.rr[i] : gg.rs[j];
      if (cur_r < gg.best_r[j] - tol_r(i, j, TieAs::split)) continue;
      double cur_s = i < j ? 0.0 : gg.ss[j];
      if (cur_s < gg.best_s[i] - tol_s(i, j, TieAs::split)) continue;
      s.profiles.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), TieAs::split});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto ok = [&](double cr, double cs, TieAs tie) {
      return cr >= gg.best_r_notie[i] - tol_r(i, i, tie) && cs >= gg.best_s_notie[i] - tol_s(i, i, tie);
    };
    auto id = static_cast<std::uint32_t>(i);
    if (ok(gg.rs[i], gg.ss[i], TieAs::seller)) s.profiles.push_back({id, id, TieAs::seller});
    if (ok(gg.rr[i], 0.0, TieAs::retailer)) s.profiles.push_back({id, id, TieAs::retailer});
    if (ok(gg.tie_r[i], gg.tie_s[i], TieAs::split)) s.split_ties.push_back({id, id, TieAs::split});
  }
  std::sort(s.profiles.begin(), s.profiles.end(), [](const Profile& a, const Profile& b) {
    return std::tie(a.i_r, a.i_s, a.tie) < std::tie(b.i_r, b.i_s, b.tie);
  });
  return s;
}

inline Scan grid_equilibrium_scan(const GameParams& g, const GridSpec& grid = {}, bool resolution = false) {
  return grid_equilibrium_scan(GridGame(g, grid), resolution);
}

namespace detail {

// Range min/max over a fixed array in O(1) per query.
class SparseTable {
 public:
  explicit SparseTable(const std::vector<double>& v) {
    std::size_t n = v.size();
    lg_.assign(n + 1, 0);
    for (std::size_t i = 2; i <= n; ++i) lg_[i] = lg_[i / 2] + 1;
    std::size_t levels = n ? lg_[n] + 1 : 1;
    mn_.assign(levels, v);
    mx_.assign(levels, v);
    for (std::size_t k = 1; k < levels; ++k)
      for (std::size_t i = 0; i + (std::size_t(1) << k) <= n; ++i) {
        std::size_t j = i + (std::size_t(1) << (k - 1));
        mn_[k][i] = std::min(mn_[k - 1][i], mn_[k - 1][j]);
        mx_[k][i] = std::max(mx_[k - 1][i], mx_[k - 1][j]);
      }
  }
  double min(std::size_t l, std::size_t r) const {  // inclusive
    std::size_t k = lg_[r - l + 1];
    return std::min(mn_[k][l], mn_[k][r + 1 - (std::size_t(1) << k)]);
  }
  double max(std::size_t l, std::size_t r) const {
    std::size_t k = lg_[r - l + 1];
    return std::max(mx_[k][l], mx_[k][r + 1 - (std::size_t(1) << k)]);
  }

 private:
  std::vector<std::size_t> lg_;
  std::vector<std::vector<double>> mn_, mx_;
};

}  // namespace detail

/// Weak dominance between grid prices. Opponent prices are tested inside each cell:
/// just above its left end, at its midpoint and just below its right end, so no
/// comparison involves a tie.
class Dominance {
 public:
  explicit Dominance(const GridGame& gg) : gg_(gg), cells_(cell_rs(gg)) {}

  bool retailer_dominated(std::size_t b) const {
    for (std::size_t a = 0; a < gg_.grid.n; ++a)
      if (a != b && retailer_dominates(a, b)) return true;
    return false;
  }
  bool seller_dominated(std::size_t b) const {
    for (std::size_t a = 0; a < gg_.grid.n; ++a)
      if (a != b && seller_dominates(a, b)) return true;
    return false;
  }

  // Against an opponent at m: own price x earns rr(x) when x < m, else rs(m).
  bool retailer_dominates(std::size_t a, std::size_t b) const {
    const std::size_t last = gg_.grid.n - 2;  // index of the last cell
    const double eps = gg_.grid.slack;
    const auto& rr = gg_.rr;
    double lo = 0.0, hi = 0.0;  // min and max of the payoff difference; cells below both are 0
    auto take = [&](double v) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    };
    if (a < b) {
      take(rr[a] - cells_.max(3 * a, 3 * b - 1));
      take(rr[a] - cells_.min(3 * a, 3 * b - 1));
      if (b <= last) take(rr[a] - rr[b]);
    } else {
      take(cells_.min(3 * b, 3 * a - 1) - rr[b]);
      take(cells_.max(3 * b, 3 * a - 1) - rr[b]);
      if (a <= last) take(rr[a] - rr[b]);
    }
    return lo >= -eps && hi > eps;
  }

  // Own price x earns ss(x) when x < m, else 0.
  bool seller_dominates(std::size_t a, std::size_t b) const {
    const std::size_t last = gg_.grid.n - 2;
    const double eps = gg_.grid.slack;
    const auto& ss = gg_.ss;
    double lo = 0.0, hi = 0.0;
    auto take = [&](double v) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    };
    if (a < b) {
      take(ss[a]);
      if (b <= last) take(ss[a] - ss[b]);
    } else {
      take(-ss[b]);
      if (a <= last) take(ss[a] - ss[b]);
    }
    return lo >= -eps && hi > eps;
  }

 private:
  static detail::SparseTable cell_rs(const GridGame& gg) {
    std::vector<double> v;
    v.reserve(3 * (gg.grid.n - 1));
    for (std::size_t k = 0; k + 1 < gg.grid.n; ++k)
      for (double m : {gg.x[k] + micro, 0.5 * (gg.x[k] + gg.x[k + 1]), gg.x[k + 1] - micro}) v.push_back(pi_rs(gg.g, m));
    return detail::SparseTable(v);
  }

  const GridGame& gg_;
  detail::SparseTable cells_;
};

struct GridOutcome {
  double price = 0.0;
  Who who = Who::seller;
  Payoffs payoffs;
};

/// Scan profiles whose prices are both undominated, then drop profiles another survivor
/// Pareto-dominates; reported as distinct (price, fulfiller) outcomes.
inline std::vector<GridOutcome> refined_grid_outcomes(const GridGame& gg, const Scan& scan) {
  Dominance dom(gg);
  const std::size_t n = gg.grid.n;
  std::vector<std::int8_t> adm_r(n, -1), adm_s(n, -1);
  auto admissible = [&](std::vector<std::int8_t>& memo, std::size_t i, bool retailer) {
    if (memo[i] < 0) memo[i] = !(retailer ? dom.retailer_dominated(i) : dom.seller_dominated(i));
    return memo[i] == 1;
  };
  std::vector<GridOutcome> cand;
  for (const auto& p : scan.profiles) {
    if (!admissible(adm_r, p.i_r, true) || !admissible(adm_s, p.i_s, false)) continue;
    auto [price, who] = gg.outcome(p);
    cand.push_back({price, who, gg.payoffs(p)});
  }
  std::sort(cand.begin(), cand.end(), [](const GridOutcome& a, const GridOutcome& b) {
    return std::tie(a.who, a.price) < std::tie(b.who, b.price);
  });
  cand.erase(std::unique(cand.begin(), cand.end(),
                         [](const GridOutcome& a, const GridOutcome& b) { return a.who == b.who && a.price == b.price; }),
             cand.end());
  const double eps = gg.grid.slack;
  std::vector<GridOutcome> out;
  for (const auto& c : cand) {
    bool dominated = false;
    for (const auto& d : cand) {
      bool weakly = d.payoffs.retailer >= c.payoffs.retailer - eps && d.payoffs.seller >= c.payoffs.seller - eps;
      bool strictly = d.payoffs.retailer > c.payoffs.retailer + eps || d.payoffs.seller > c.payoffs.seller + eps;
      if (weakly && strictly) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(c);
  }
  return out;
}

}  // namespace srbg::oracle
