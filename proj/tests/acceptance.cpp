// Acceptance run: one PASS/FAIL line per criterion, followed by its measurements.
// Usage: acceptance [--cli path/to/srbg] [--only N]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "srbg/srbg.hpp"

using namespace srbg;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Result {
  bool pass = true;
  std::string detail;
};

void report(int n, const Result& r, double secs) {
  std::printf("criterion %d %s (%.1fs): %s\n", n, r.pass ? "PASS" : "FAIL", secs, r.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Pair {
  double cr, cs;
};

Pair draw_pair(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double cr = 0.05 + 0.9 * U(rng);
  return {cr, cr * (0.02 + 0.96 * U(rng))};
}

Costs linear(Pair p, double beta = 0.5) { return Costs{p.cr, p.cs, beta, DemandCurve::linear()}; }

// ---- 1 ----
Result closed_forms() {
  auto t0 = Clock::now();
  auto t = threshold_fees(linear({0.6, 0.4}));
  struct Item {
    const char* name;
    double got, want;
  } items[] = {{"p_rstar", t.p_rstar, 0.8},           {"alpha_opt", t.alpha_opt, 1.0 / 3.0},
               {"alpha_rstar", t.alpha_rstar, 0.5},   {"alpha_rdagger", t.alpha_rdagger, 0.25},
               {"c_sstar", t.c_sstar, 0.45},          {"alpha_sstar", t.alpha_sstar, 0.2}};
  Result r;
  double worst = 0.0;
  for (auto& i : items) {
    double e = std::abs(i.got - i.want);
    worst = std::max(worst, e);
    if (e > 1e-9) {
      r.pass = false;
      r.detail += fmt("%s=%.12g expected %.12g; ", i.name, i.got, i.want);
    }
  }
  double secs = seconds_since(t0);
  if (secs >= 1.0) r.pass = false;
  r.detail += fmt("max error %.3g (tolerance 1e-9), runtime %.4fs (limit 1s)", worst, secs);
  return r;
}

// ---- 2 ----
Result oracle_families() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(20240101);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  oracle::GridSpec grid{2001};
  std::size_t checks = 0, dis = 0, amb = 0;
  std::string first;
  for (int k = 0; k < 100; ++k) {
    auto p = draw_pair(rng);
    double a = 0.01 + 0.98 * U(rng);
    auto rep = verify::check_families(landscape(at_alpha(linear(p), a)), grid);
    checks += rep.checks.size();
    dis += rep.disagreements;
    amb += rep.ambiguous;
    if (rep.disagreements && first.empty())
      for (auto& c : rep.checks)
        if (c.status == verify::Status::disagree) {
          first = fmt(" first: c_r=%.6f c_s=%.6f alpha=%.6f %s", p.cr, p.cs, a, c.what.c_str());
          break;
        }
  }
  double secs = seconds_since(t0);
  Result r{dis == 0 && secs < 300.0, ""};
  r.detail = fmt("%zu grid checks over 100 draws at n=2001: %zu disagreements, %zu boundary-ambiguous; runtime %.1fs "
                 "(limit 300s)",
                 checks, dis, amb, secs) +
             first;
  return r;
}

// ---- 3 ----
Result no_split_market() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  oracle::GridSpec grid{2001};
  int fails = 0;
  double min_gain = 1e300;
  for (int k = 0; k < 1000; ++k) {
    auto p = draw_pair(rng);
    double beta = 0.1 * (1 + static_cast<int>(U(rng) * 9.0));
    auto g = at_alpha(linear(p, beta), 0.01 + 0.98 * U(rng));
    double price = U(rng);
    auto c = oracle::grid_is_nash(g, price, price, grid, oracle::TieAs::split);
    if (c.ok) ++fails;
    min_gain = std::min(min_gain, std::max(c.retailer_gain, c.seller_gain));
  }
  return {fails == 0, fmt("1000 split ties (beta in 0.1..0.9): %d without a profitable deviation; smallest best gain %.3g",
                          fails, min_gain)};
}

// ---- 4 ----
// Outcome rows plus which key price starts the continuum.
std::string row_signature(const Landscape& l) {
  std::string s;
  for (const auto& o : refined_outcomes(l)) {
    s += to_string(o.label);
    if (o.label == OutcomeLabel::continuum_s) s += std::abs(o.price_lo - l.k.p_rstar) <= 1e-9 ? "@r*" : "@sind";
    s += ";";
  }
  return s;
}

std::vector<std::pair<std::string, double>> fee_list(const ThresholdFees& t, bool case_i) {
  std::vector<std::pair<std::string, double>> v = {{"alpha_rstar", t.alpha_rstar}, {"alpha_sdagger", t.alpha_sdagger}};
  if (case_i) {
    v.emplace_back("alpha_sstar", t.alpha_sstar);
    v.emplace_back("alpha_opt", t.alpha_opt);
  } else {
    v.emplace_back("alpha_rdagger", t.alpha_rdagger);
  }
  return v;
}

bool ordered_labels(const std::vector<std::string>& seq) {
  static const std::vector<std::string> order = {"prind_s", "psstar_s", "continuum_s", "prstar_r"};
  int last = -1;
  for (const auto& s : seq) {
    int pos = static_cast<int>(std::find(order.begin(), order.end(), s) - order.begin());
    if (pos < last) return false;
    last = pos;
  }
  return true;
}

Result outcome_partition() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(99);
  const int na = 1000;
  const double cell = 1.0 / na;
  oracle::GridSpec grid{2001};
  std::size_t changes = 0, stray = 0, oracle_cells = 0, oracle_dis = 0, oracle_amb = 0;
  std::string first;
  for (int k = 0; k < 50; ++k) {
    auto p = draw_pair(rng);
    Costs c = linear(p);
    auto t = threshold_fees(c);
    auto fees = fee_list(t, t.case_i(c));
    std::string prev;
    for (int i = 0; i < na; ++i) {
      double a = (i + 0.5) * cell;
      auto sig = row_signature(landscape(at_alpha(c, a), t));
      if (i > 0 && sig != prev) {
        ++changes;
        double lo = a - cell, hi = a;
        bool near = false;
        for (auto& [name, v] : fees)
          if (v >= lo - cell && v <= hi + cell) near = true;
        if (!near) {
          ++stray;
          if (first.empty()) first = fmt(" first stray change: c_r=%.6f c_s=%.6f alpha=%.4f %s -> %s", p.cr, p.cs, a, prev.c_str(), sig.c_str());
        }
        for (double x : {lo, hi}) {
          auto v = verify::verify_cell(c, t, x, grid);
          ++oracle_cells;
          if (v.status == verify::Status::disagree) ++oracle_dis;
          if (v.status == verify::Status::ambiguous) ++oracle_amb;
        }
      }
      prev = sig;
    }
  }

  // axis slices on a 400 x 400 lattice: labels along alpha appear in table order, and the
  // (p_sstar, s) region shows up exactly when c_s <= c_sstar
  const int n = 400;
  std::size_t bad_columns = 0;
  for (int axis = 0; axis < 2; ++axis)
    for (int i = 0; i < n; ++i) {
      double x = (i + 0.5) / n;
      Pair p = axis == 0 ? Pair{x, 0.4} : Pair{0.6, x};
      if (!(p.cs < p.cr)) continue;
      Costs c = linear(p);
      auto t = threshold_fees(c);
      std::vector<std::string> seq;
      bool has_sstar = false;
      for (int k = 0; k < n; ++k) {
        auto rows = refined_outcomes(landscape(at_alpha(c, (k + 0.5) / n), t));
        if (rows.empty()) continue;
        std::string lab = to_string(rows.front().label);
        if (lab == "psstar_s") has_sstar = true;
        if (seq.empty() || seq.back() != lab) seq.push_back(lab);
      }
      bool expect_sstar = t.case_i(c) && t.alpha_opt - std::max(t.alpha_sstar, 0.0) > 2.0 / n;
      if (!ordered_labels(seq) || (expect_sstar && !has_sstar) || (!t.case_i(c) && has_sstar)) ++bad_columns;
    }

  // the running example slice through the oracle alone
  Costs run = linear({0.6, 0.4});
  std::vector<double> alphas;
  for (int i = 0; i < 200; ++i) alphas.push_back((i + 0.5) / 200.0);
  auto sweep = verify::sweep_verify(run, alphas, grid);
  std::set<std::string> names;
  bool within = true;
  for (auto& b : sweep.boundaries) {
    names.insert(b.nearest_name);
    if (std::abs(b.alpha - b.nearest_fee) > 1.0 / 200.0) within = false;
  }
  std::set<std::string> want = {"alpha_sstar", "alpha_opt", "alpha_rstar", "alpha_sdagger"};

  Result r;
  r.pass = stray == 0 && oracle_dis == 0 && bad_columns == 0 && within && names == want && sweep.disagreements == 0;
  r.detail = fmt("50 pairs x 1000 fees: %zu outcome changes, %zu not within one cell of a threshold fee; oracle at %zu "
                 "boundary cells: %zu disagree, %zu ambiguous; slices c_s=0.4 and c_r=0.6: %zu bad columns; oracle-only "
                 "sweep of the running example finds %zu boundaries at {",
                 changes, stray, oracle_cells, oracle_dis, oracle_amb, bad_columns, sweep.boundaries.size());
  for (auto& s : names) r.detail += s + " ";
  r.detail += fmt("} within one cell: %s; runtime %.1fs", within ? "yes" : "no", seconds_since(t0)) + first;
  return r;
}

// ---- 5 ----
Result fee_game() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(5);
  int low_bad = 0, high_bad = 0, high_case_bar = 0;
  std::string first_low;
  for (int k = 0; k < 1000; ++k) {
    auto p = draw_pair(rng);
    FeeGame fg(linear(p));
    auto t = fg.fees();
    auto lo = alpha_star(fg, StrategyProfile::low());
    if (std::abs(lo.alpha_star - t.alpha_rstar) > 1e-9) {
      ++low_bad;
      if (first_low.empty())
        first_low = fmt(" e.g. c_r=%.4f c_s=%.4f: alpha*=%.6f (payoff %.6g) vs alpha_rstar=%.6f (payoff %.6g)", p.cr, p.cs,
                        lo.alpha_star, lo.retailer_payoff, t.alpha_rstar,
                        fg.payoffs(t.alpha_rstar, StrategyProfile::low()).retailer);
    }
    auto hi = alpha_star(fg, StrategyProfile::high());
    auto ab = alpha_bar(fg);
    double want = ab.exceeds ? ab.alpha : t.alpha_rdagger;
    if (ab.exceeds) ++high_case_bar;
    if (std::abs(hi.alpha_star - want) > 1e-9) ++high_bad;
  }
  // alpha_bar against a 10^6-point sweep
  int bar_bad = 0;
  double worst = 0.0;
  std::mt19937_64 rng2(55);
  for (int k = 0; k < 20; ++k) {
    auto p = draw_pair(rng2);
    FeeGame fg(linear(p));
    auto ab = alpha_bar(fg);
    const int n = 1000000;
    double hi = 1.0 - p.cs, best = 0.0, bv = -1e300;
    for (int i = 0; i < n; ++i) {
      double a = hi * i / (n - 1);
      double v = fg.referral_at_sstar(a);
      if (v > bv + 1e-15) {
        bv = v;
        best = a;
      }
    }
    worst = std::max(worst, std::abs(best - ab.alpha));
    if (std::abs(best - ab.alpha) > 1e-4) ++bar_bad;
  }
  Result r;
  r.pass = low_bad == 0 && high_bad == 0 && bar_bad == 0;
  r.detail = fmt("low selection: alpha* != alpha_rstar on %d of 1000 pairs; high selection: %d mismatches with the case "
                 "split (%d pairs in the alpha_bar case); alpha_bar vs 10^6-point sweep on 20 pairs: max error %.2g, %d "
                 "over 1e-4; runtime %.1fs",
                 low_bad, high_bad, high_case_bar, worst, bar_bad, seconds_since(t0)) +
             first_low;
  return r;
}

// ---- 6 ----
StrategyProfile random_table(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<std::pair<double, double>> t;
  int m = 3 + static_cast<int>(U(rng) * 6);
  for (int i = 0; i < m; ++i) t.emplace_back(U(rng), U(rng));
  return StrategyProfile::custom(t);
}

Result bounds() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(606);
  std::vector<StrategyProfile> tables;
  for (int i = 0; i < 20; ++i) tables.push_back(random_table(rng));
  int runs = 0, r_lo = 0, r_hi = 0, s_out = 0, a_out = 0, pairs_hi = 0;
  const double tol = 1e-9;
  for (int k = 0; k < 200; ++k) {
    auto p = draw_pair(rng);
    FeeGame fg(linear(p));
    auto b = payoff_bounds(fg);
    std::vector<StrategyProfile> rhos = {StrategyProfile::low(), StrategyProfile::high()};
    rhos.insert(rhos.end(), tables.begin(), tables.end());
    bool any_hi = false;
    for (const auto& rho : rhos) {
      auto s = alpha_star(fg, rho);
      ++runs;
      if (s.retailer_payoff < b.retailer.lo - tol) ++r_lo;
      if (s.retailer_payoff > b.retailer.hi + tol) {
        ++r_hi;
        any_hi = true;
      }
      if (s.seller_payoff < b.seller.lo - tol || s.seller_payoff > b.seller.hi + tol) ++s_out;
      if (s.alpha_star < b.alpha.lo - tol || s.alpha_star > b.alpha.hi + tol) ++a_out;
    }
    if (any_hi) ++pairs_hi;
  }
  Result r;
  r.pass = r_lo + r_hi + s_out + a_out == 0;
  r.detail = fmt("%d optima (200 pairs x {low, high, 20 tables}): retailer below bound %d, above bound %d (on %d pairs), "
                 "seller outside %d, alpha* outside %d; runtime %.1fs",
                 runs, r_lo, r_hi, pairs_hi, s_out, a_out, seconds_since(t0));
  return r;
}

// ---- 7 ----
double max_jump(const FeeGame& fg, const StrategyProfile& rho, int n) {
  double prev = fg.payoffs(0.5 / n, rho).retailer, m = 0.0;
  for (int i = 1; i < n; ++i) {
    double v = fg.payoffs((i + 0.5) / n, rho).retailer;
    m = std::max(m, std::abs(v - prev));
    prev = v;
  }
  return m;
}

Result continuity() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(77);
  double worst = 1e300;
  int runs = 0, bad = 0;
  auto smooth = StrategyProfile::custom({{0.0, 0.7}, {0.5, 0.85}, {1.0, 1.0}});
  for (int k = 0; k < 20; ++k) {
    FeeGame fg(linear(draw_pair(rng)));
    for (const auto& rho : {StrategyProfile::low(), StrategyProfile::high(), smooth}) {
      double j1 = max_jump(fg, rho, 1000), j2 = max_jump(fg, rho, 10000);
      double ratio = j2 > 0.0 ? j1 / j2 : 1e300;
      worst = std::min(worst, ratio);
      ++runs;
      if (ratio < 9.0) ++bad;
    }
  }
  return {bad == 0, fmt("%d curves (20 pairs x {low, high, smooth table}); jump(1000 cells)/jump(10000 cells) >= 9 "
                        "required, smallest ratio %.3f; runtime %.1fs",
                        runs, worst, seconds_since(t0))};
}

// ---- 8 ----
Result outside_option() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int solved = 0, no_region = 0, stay_bad = 0, payoff_bad = 0, special = 0, special_bad = 0;
  for (int k = 0; k < 100; ++k) {
    auto p = draw_pair(rng);
    double delta = (p.cr - p.cs) * (0.01 + 0.98 * U(rng));
    FeeGame fg(linear(p));
    auto t = fg.fees();
    for (const auto& rho : {StrategyProfile::low(), StrategyProfile::high()}) {
      FullGameSolution s;
      try {
        s = solve_full_game(fg, delta, rho);
      } catch (const NoStayRegion&) {
        ++no_region;
        continue;
      }
      ++solved;
      if (fg.payoffs(s.alpha_star_o, rho).seller < s.leaving_seller_payoff - 1e-12) ++stay_bad;
      if (s.seller_payoff < s.leaving_seller_payoff - 1e-12) ++payoff_bad;
      if (s.alpha_max <= std::min(t.alpha_rdagger, t.alpha_sstar)) {
        ++special;
        double want = std::min(alpha_star(fg, rho).alpha_star, s.alpha_max);
        if (std::abs(s.alpha_star_o - want) > 1e-6) ++special_bad;
      }
    }
  }
  Result r{stay_bad + payoff_bad + special_bad == 0, ""};
  r.detail = fmt("%d solved games (%d without a stay region): stay constraint broken %d, seller below leaving payoff %d; "
                 "special case checked %d times, %d mismatches; runtime %.1fs",
                 solved, no_region, stay_bad, payoff_bad, special, special_bad, seconds_since(t0));
  return r;
}

// ---- 9 ----
std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Result determinism(const std::string& cli) {
  if (cli.empty()) return {false, "no --cli path given"};
  auto t0 = Clock::now();
  std::string a = "acceptance_verify_a.json", b = "acceptance_verify_b.json";
  std::string base = "\"" + cli + "\" verify --seed 4242 --samples 2 --alpha-grid-n 40 --grid-n 1001 --out ";
  int ra = std::system((base + a).c_str());
  int rb = std::system((base + b).c_str());
  std::string sa = slurp(a), sb = slurp(b);
  bool same = !sa.empty() && sa == sb;
  std::remove(a.c_str());
  std::remove(b.c_str());
  return {same && ra == rb, fmt("two verify runs with seed 4242: %zu bytes, identical %s, exit codes %d/%d; runtime %.1fs",
                                sa.size(), same ? "yes" : "no", ra, rb, seconds_since(t0))};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  int only = 0;
  std::set<int> known;
  for (int i = 1; i + 1 < argc; ++i) {
    std::string k = argv[i];
    if (k == "--cli") cli = argv[++i];
    else if (k == "--only") only = std::atoi(argv[++i]);
    else if (k == "--known-fail") {
      std::stringstream ss(argv[++i]);
      for (std::string tok; std::getline(ss, tok, ',');) known.insert(std::atoi(tok.c_str()));
    }
  }
  std::vector<std::function<Result()>> crit = {closed_forms,  oracle_families, no_split_market,
                                               outcome_partition, fee_game, bounds, continuity, outside_option,
                                               [&] { return determinism(cli); }};
  int failed = 0, failed_known = 0;
  for (std::size_t i = 0; i < crit.size(); ++i) {
    int n = static_cast<int>(i + 1);
    if (only && n != only) continue;
    auto t0 = Clock::now();
    auto r = crit[i]();
    report(n, r, seconds_since(t0));
    if (r.pass) continue;
    ++failed;
    if (known.count(n)) ++failed_known;
  }
  std::printf("%d of %d criteria failed", failed, only ? 1 : static_cast<int>(crit.size()));
  if (failed_known) std::printf(" (%d listed as known deviations, see README)", failed_known);
  std::printf("\n");
  return failed > failed_known ? 1 : 0;
}
