// srbg: reports, region maps, payoff curves, fee sweeps and oracle verification.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "srbg/srbg.hpp"

using json = nlohmann::ordered_json;
using namespace srbg;

namespace {

constexpr int schema_version = 1;

struct Config {
  double c_r = 0.6;
  double c_s = 0.4;
  std::optional<double> alpha;
  std::optional<double> delta;
  double beta = 0.5;
  std::string demand = "linear";
  std::optional<double> p_max;
  std::string rho = "low";
  std::size_t grid_n = 2001;
  std::optional<std::size_t> alpha_grid_n;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out;

  // command specific
  std::string axis = "cr";
  std::size_t x_n = 400;
  std::string mode = "p";
  double perturb_fee = 0.0;
  std::size_t samples = 1;
  bool cr_set = false;
  bool cs_set = false;
};

double r12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string f12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json num(double x) { return r12(x); }
json opt(const std::optional<double>& x) { return x ? num(*x) : json(nullptr); }

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

// Two numeric columns; a non-numeric first row is a header.
std::vector<std::pair<double, double>> read_pairs(const std::string& path) {
  std::vector<std::pair<double, double>> out;
  auto rows = read_csv(path);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() < 2) throw ConfigError(path + ": need two columns on line " + std::to_string(i + 1));
    try {
      out.emplace_back(std::stod(rows[i][0]), std::stod(rows[i][1]));
    } catch (const std::invalid_argument&) {
      if (i == 0) continue;
      throw ConfigError(path + ": not a number on line " + std::to_string(i + 1));
    }
  }
  return out;
}

DemandCurve load_demand(const Config& c) {
  if (c.demand == "linear") return DemandCurve::linear();
  RawDemand raw;
  raw.samples = read_pairs(c.demand);
  if (raw.samples.empty()) throw ConfigError("demand file has no samples");
  std::sort(raw.samples.begin(), raw.samples.end());
  raw.p_max = c.p_max.value_or(raw.samples.back().first);
  raw.q_at_zero = raw.samples.front().second;
  if (raw.samples.front().first != 0.0) throw NonNormalizable("demand samples must start at p = 0");
  auto curve = normalize(raw);
  auto rep = validate(curve);
  if (!rep.ok()) {
    std::string msg = rep.violations.front().invariant + " violated";
    if (!rep.violations.front().samples.empty()) {
      msg += " at samples";
      for (auto i : rep.violations.front().samples) msg += " " + std::to_string(i);
    }
    throw ConfigError(msg);
  }
  return curve;
}

StrategyProfile load_rho(const Config& c) {
  if (c.rho == "low") return StrategyProfile::low();
  if (c.rho == "high") return StrategyProfile::high();
  auto t = read_pairs(c.rho);
  if (t.empty()) throw ConfigError("rho table has no rows");
  return StrategyProfile::custom(t);
}

std::string rho_name(const StrategyProfile& r) { return r.kind == StrategyProfile::Kind::custom ? "custom" : to_string(r.kind); }

Costs costs_of(const Config& c) {
  Costs k{c.c_r, c.c_s, c.beta, load_demand(c)};
  validate(k);
  return k;
}

double cell_center(std::size_t k, std::size_t n) { return (static_cast<double>(k) + 0.5) / static_cast<double>(n); }

json config_json(const Config& c) {
  json j;
  j["c_r"] = num(c.c_r);
  j["c_s"] = num(c.c_s);
  j["alpha"] = opt(c.alpha);
  j["delta"] = opt(c.delta);
  j["beta"] = num(c.beta);
  j["demand"] = c.demand;
  j["rho"] = c.rho;
  j["grid_n"] = c.grid_n;
  j["tol"] = num(c.tol);
  return j;
}

json header(const Config& c, const std::string& cmd) {
  json j;
  j["schema_version"] = schema_version;
  j["command"] = cmd;
  j["seed"] = c.seed;
  return j;
}

json family_json(const Family& f) {
  json j;
  j["kind"] = to_string(f.kind);
  if (f.kind != Family::Kind::shared_seller) j["fixed_price"] = num(f.fixed);
  j["lo"] = num(f.lo);
  j["hi"] = num(f.hi);
  j["status"] = to_string(f.status);
  return j;
}

json outcome_json(const Outcome& o) {
  json j;
  j["label"] = to_string(o.label);
  j["fulfiller"] = to_string(o.fulfiller);
  j["price_lo"] = num(o.price_lo);
  j["price_hi"] = num(o.price_hi);
  return j;
}

json fees_json(const ThresholdFees& t) {
  json j;
  j["alpha_rstar"] = num(t.alpha_rstar);
  j["alpha_sstar"] = num(t.alpha_sstar);
  j["alpha_sstar_feasible"] = t.alpha_sstar_feasible;
  j["alpha_opt"] = num(t.alpha_opt);
  j["alpha_rdagger"] = num(t.alpha_rdagger);
  j["alpha_sdagger"] = num(t.alpha_sdagger);
  j["c_sstar"] = num(t.c_sstar);
  return j;
}

json key_prices_json(const KeyPrices& k) {
  json j;
  j["p_rstar"] = num(k.p_rstar);
  j["p_sstar"] = num(k.p_sstar);
  j["p_tilde"] = num(k.p_tilde);
  j["p_rind"] = num(k.p_rind);
  j["p_sind"] = num(k.p_sind);
  j["p_dagger"] = opt(k.p_dagger);
  return j;
}

// Outcome rows as fee intervals.
json regions_json(const Costs& c, const ThresholdFees& t) {
  json arr = json::array();
  auto add = [&](const char* label, double lo, double hi) {
    lo = std::max(lo, 0.0);
    hi = std::min(hi, 1.0);
    if (hi <= lo) return;
    arr.push_back({{"label", label}, {"alpha_lo", num(lo)}, {"alpha_hi", num(hi)}});
  };
  if (t.case_i(c)) {
    add("prind_s", 0.0, t.alpha_sstar);
    add("psstar_s", t.alpha_sstar, t.alpha_opt);
    add("continuum_s", t.alpha_opt, t.alpha_sdagger);
  } else {
    add("prind_s", 0.0, t.alpha_rdagger);
    add("continuum_s", t.alpha_rdagger, t.alpha_sdagger);
  }
  add("prstar_r", t.alpha_sdagger, 1.0);
  return arr;
}

json solution_json(const FeeGameSolution& s) {
  json j;
  j["alpha_star"] = num(s.alpha_star);
  j["retailer_payoff"] = num(s.retailer_payoff);
  j["seller_payoff"] = num(s.seller_payoff);
  j["outcome"] = outcome_json(s.outcome);
  j["alpha_bar"] = opt(s.alpha_bar);
  return j;
}

json full_game_json(const FullGameSolution& s) {
  json j;
  j["alpha_star_o"] = num(s.alpha_star_o);
  j["seller_stays"] = s.seller_stays;
  j["alpha_max"] = num(s.alpha_max);
  j["stay_region_contiguous"] = s.stay_contiguous;
  j["leaving_price"] = num(s.leaving_outcome.price_lo);
  j["leaving_seller_payoff"] = num(s.leaving_seller_payoff);
  j["retailer_payoff"] = num(s.retailer_payoff);
  j["seller_payoff"] = num(s.seller_payoff);
  j["outcome"] = outcome_json(s.outcome);
  return j;
}

json bounds_json(const PayoffBounds& b) {
  auto iv = [](const Interval& i) { return json{{"lo", num(i.lo)}, {"hi", num(i.hi)}}; };
  return {{"retailer", iv(b.retailer)}, {"seller", iv(b.seller)}, {"alpha_star", iv(b.alpha)}};
}

void write_output(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::path path(c.out);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + c.out);
    f << text;
  }
  std::filesystem::rename(tmp, path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Rows with named columns, rendered as CSV or a JSON document.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  std::string csv() const {
    std::string s;
    for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
    s += "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) s += ",";
        if (r[i].is_number_float()) s += f12(r[i].get<double>());
        else if (r[i].is_number()) s += r[i].dump();
        else if (r[i].is_string()) s += r[i].get<std::string>();
      }
      s += "\n";
    }
    return s;
  }

  json as_json() const {
    json arr = json::array();
    for (const auto& r : rows) {
      json o;
      for (std::size_t i = 0; i < r.size(); ++i) o[columns[i]] = r[i].is_string() && r[i].get<std::string>().empty() ? json(nullptr) : r[i];
      arr.push_back(o);
    }
    return arr;
  }
};

void emit_table(const Config& c, const std::string& cmd, const Table& t, json extra = json::object()) {
  if (c.format == "csv") {
    write_output(c, t.csv());
    return;
  }
  json j = header(c, cmd);
  j["config"] = config_json(c);
  for (auto& [k, v] : extra.items()) j[k] = v;
  j["rows"] = t.as_json();
  write_output(c, dump(j));
}

// ---- commands ----

int cmd_report(const Config& c) {
  Costs costs = costs_of(c);
  auto t = threshold_fees(costs);
  json j = header(c, "report");
  j["config"] = config_json(c);
  json notes = json::array();
  j["case"] = t.case_i(costs) ? "i" : "ii";
  j["threshold_fees"] = fees_json(t);
  j["regions"] = regions_json(costs, t);

  if (c.alpha) {
    GameParams g = at_alpha(costs, *c.alpha);
    validate(g);
    Landscape l = landscape(g, t);
    j["key_prices"] = key_prices_json(l.k);
    json fam = json::object();
    auto list = [](const std::vector<Family>& fs) {
      json a = json::array();
      for (const auto& f : fs) a.push_back(family_json(f));
      return a;
    };
    fam["unrefined"] = list(nash_set(l, c.tol));
    fam["admissible"] = list(admissible_set(l, c.tol));
    fam["refined"] = list(refined_families(l, c.tol));
    j["families"] = fam;
    json outs = json::array();
    for (const auto& o : refined_outcomes(l, c.tol)) outs.push_back(outcome_json(o));
    j["outcomes"] = outs;
    auto rho = load_rho(c);
    auto e = eq_payoffs(l, rho, c.tol);
    j["equilibrium_payoffs"] = {{"rho", rho_name(rho)}, {"retailer", num(e.retailer)}, {"seller", num(e.seller)}};
    notes.push_back("fee game ignores --alpha and optimizes the fee");
  }

  FeeGame fg(costs);
  auto rho = load_rho(c);
  json fee = json::object();
  fee["rho"] = rho_name(rho);
  fee["solution"] = solution_json(alpha_star(fg, rho));
  fee["bounds"] = bounds_json(payoff_bounds(fg));
  j["fee_game"] = fee;

  if (c.delta) {
    auto s = solve_full_game(fg, *c.delta, rho);
    j["full_game"] = full_game_json(s);
  }
  j["notes"] = notes;
  write_output(c, dump(j));
  return 0;
}

int cmd_region_map(const Config& c) {
  if (c.axis != "cr" && c.axis != "cs") throw ConfigError("axis must be cr or cs");
  DemandCurve curve = load_demand(c);
  const std::size_t nx = c.x_n, na = c.alpha_grid_n.value_or(400);
  if (nx == 0 || na == 0) throw ConfigError("lattice sizes must be positive");
  Table t{{"x", "alpha", "outcome_label", "price_lo", "price_hi"}, {}};
  for (std::size_t i = 0; i < nx; ++i) {
    double x = cell_center(i, nx);
    double cr = c.axis == "cr" ? x : c.c_r;
    double cs = c.axis == "cs" ? x : c.c_s;
    bool feasible = cs > 0.0 && cs < cr && cr < 1.0;
    std::optional<ThresholdFees> fees;
    Costs costs{cr, cs, c.beta, curve};
    if (feasible) fees = threshold_fees(costs);
    for (std::size_t k = 0; k < na; ++k) {
      double a = cell_center(k, na);
      if (!feasible) {
        t.rows.push_back({num(x), num(a), "infeasible", "", ""});
        continue;
      }
      Landscape l = landscape(at_alpha(costs, a), *fees);
      for (const auto& o : refined_outcomes(l, c.tol))
        t.rows.push_back({num(x), num(a), to_string(o.label), num(o.price_lo), num(o.price_hi)});
    }
  }
  json extra = {{"axis", c.axis}, {"fixed", c.axis == "cr" ? num(c.c_s) : num(c.c_r)}};
  emit_table(c, "region-map", t, extra);
  return 0;
}

int cmd_payoff_curves(const Config& c) {
  Costs costs = costs_of(c);
  if (c.mode == "p") {
    if (!c.alpha) throw ConfigError("payoff-curves --mode p needs --alpha");
    GameParams g = at_alpha(costs, *c.alpha);
    validate(g);
    auto k = key_prices(g);
    Table t{{"p", "pi_rr", "pi_rs", "pi_ss", "marker"}, {}};
    auto row = [&](double p, const std::string& m) {
      t.rows.push_back({num(p), num(pi_rr(g, p)), num(pi_rs(g, p)), num(pi_ss(g, p)), m});
    };
    auto xs = num::linspace(0.0, 1.0, c.grid_n);
    for (double p : xs) row(p, "");
    std::vector<std::pair<std::string, double>> marks = {
        {"p_rstar", k.p_rstar}, {"p_sstar", k.p_sstar}, {"p_tilde", k.p_tilde}, {"p_rind", k.p_rind}, {"p_sind", k.p_sind}};
    if (k.p_dagger) marks.emplace_back("p_dagger", *k.p_dagger);
    for (auto& [name, p] : marks)
      if (p <= 1.0) row(p, name);
    emit_table(c, "payoff-curves", t, {{"mode", "p"}});
    return 0;
  }
  if (c.mode != "alpha") throw ConfigError("mode must be p or alpha");
  FeeGame fg(costs);
  auto rho = load_rho(c);
  std::optional<double> leave;
  if (c.delta) leave = leaving_outcome(costs.curve, costs.c_r, costs.c_s, *c.delta).seller_payoff;
  std::vector<std::string> cols = {"alpha", "pi_r_eq", "pi_s_eq", "region_label"};
  if (leave) cols.push_back("pi_s_leave");
  Table t{cols, {}};
  const std::size_t na = c.alpha_grid_n.value_or(1000);
  for (std::size_t i = 0; i < na; ++i) {
    double a = cell_center(i, na);
    auto e = fg.payoffs(a, rho);
    std::vector<json> r = {num(a), num(e.retailer), num(e.seller), to_string(e.outcome.label)};
    if (leave) r.push_back(num(*leave));
    t.rows.push_back(r);
  }
  emit_table(c, "payoff-curves", t, {{"mode", "alpha"}, {"rho", rho_name(rho)}});
  return 0;
}

int cmd_fee_sweep(const Config& c) {
  Costs costs = costs_of(c);
  FeeGame fg(costs);
  auto rho = load_rho(c);
  Table t{{"alpha", "outcome_label", "price", "pi_r_eq", "pi_s_eq", "clamped"}, {}};
  const std::size_t na = c.alpha_grid_n.value_or(1000);
  for (std::size_t i = 0; i < na; ++i) {
    double a = cell_center(i, na);
    auto e = fg.payoffs(a, rho);
    t.rows.push_back({num(a), to_string(e.outcome.label), num(e.outcome.price_lo), num(e.retailer), num(e.seller),
                      e.clamped ? 1 : 0});
  }
  json extra;
  extra["rho"] = rho_name(rho);
  extra["threshold_fees"] = fees_json(fg.fees());
  extra["solution"] = solution_json(alpha_star(fg, rho));
  extra["bounds"] = bounds_json(payoff_bounds(fg));
  if (c.delta) extra["full_game"] = full_game_json(solve_full_game(fg, *c.delta, rho));
  if (c.alpha) extra["notes"] = json::array({"fee game ignores --alpha and optimizes the fee"});
  emit_table(c, "fee-sweep", t, extra);
  return 0;
}

int cmd_verify(const Config& c) {
  DemandCurve curve = load_demand(c);
  oracle::GridSpec grid{c.grid_n, c.tol};
  if (grid.n < 3) throw ConfigError("grid-n must be at least 3");
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const std::size_t na = c.alpha_grid_n.value_or(100);
  std::vector<double> alphas;
  for (std::size_t i = 0; i < na; ++i) alphas.push_back(cell_center(i, na));

  json j = header(c, "verify");
  j["config"] = config_json(c);
  j["perturb_fee"] = num(c.perturb_fee);
  j["price_tolerance"] = num(verify::price_tau(grid));
  json runs = json::array();
  std::size_t dis = 0, amb = 0, fam_dis = 0, fam_amb = 0, cells = 0;
  for (std::size_t s = 0; s < c.samples; ++s) {
    double cr = c.c_r, cs = c.c_s;
    if (!c.cr_set) cr = 0.05 + 0.9 * U(rng);
    if (!c.cs_set) cs = cr * (0.02 + 0.96 * U(rng));
    Costs costs{cr, cs, c.beta, curve};
    validate(costs);
    auto rep = verify::sweep_verify(costs, alphas, grid, c.perturb_fee);
    json run;
    run["c_r"] = num(cr);
    run["c_s"] = num(cs);
    run["threshold_fees"] = fees_json(threshold_fees(costs));
    run["disagreements"] = rep.disagreements;
    run["ambiguous"] = rep.ambiguous;
    json bad = json::array();
    std::size_t fd = 0, fa = 0;
    for (const auto& cell : rep.cells) {
      auto fr = verify::check_families(landscape(at_alpha(costs, cell.alpha)), grid);
      fd += fr.disagreements;
      fa += fr.ambiguous;
      if (cell.status == verify::Status::agree) continue;
      json o = {{"alpha", num(cell.alpha)}, {"status", verify::to_string(cell.status)}, {"reason", cell.reason},
                {"guard_margin", num(cell.margin)}};
      bad.push_back(o);
    }
    run["family_disagreements"] = fd;
    run["family_ambiguous"] = fa;
    run["cells"] = bad;
    json bounds = json::array();
    for (const auto& b : rep.boundaries)
      bounds.push_back({{"alpha", num(b.alpha)}, {"nearest_fee", b.nearest_name}, {"nearest_value", num(b.nearest_fee)},
                        {"distance", num(std::abs(b.alpha - b.nearest_fee))}});
    run["boundaries"] = bounds;
    runs.push_back(run);
    dis += rep.disagreements;
    amb += rep.ambiguous;
    fam_dis += fd;
    fam_amb += fa;
    cells += rep.cells.size();
  }
  j["runs"] = runs;
  j["summary"] = {{"cells", cells},
                  {"disagreements", dis},
                  {"ambiguous", amb},
                  {"family_disagreements", fam_dis},
                  {"family_ambiguous", fam_amb},
                  {"passed", dis == 0 && fam_dis == 0}};
  write_output(c, dump(j));
  return dis == 0 && fam_dis == 0 ? 0 : 1;
}

void shared_flags(CLI::App* sub, Config& c) {
  sub->add_option_function<double>("--cr", [&c](double v) {
    c.c_r = v;
    c.cr_set = true;
  }, "retailer cost");
  sub->add_option_function<double>("--cs", [&c](double v) {
    c.c_s = v;
    c.cs_set = true;
  }, "seller cost");
  sub->add_option_function<double>("--alpha", [&c](double v) { c.alpha = v; }, "referral fee");
  sub->add_option_function<double>("--delta", [&c](double v) { c.delta = v; }, "seller cost increase when leaving");
  sub->add_option("--beta", c.beta, "retailer share of demand at equal prices");
  sub->add_option("--demand", c.demand, "linear or a CSV of p,q samples");
  sub->add_option_function<double>("--p-max", [&c](double v) { c.p_max = v; }, "price where raw demand vanishes");
  sub->add_option("--rho", c.rho, "low, high or a CSV of alpha,price");
  sub->add_option("--grid-n", c.grid_n, "oracle or price grid size");
  sub->add_option_function<std::size_t>("--alpha-grid-n", [&c](std::size_t v) { c.alpha_grid_n = v; }, "fee grid size");
  sub->add_option("--tol", c.tol, "interval and payoff tolerance");
  sub->add_option("--seed", c.seed, "seed for random draws");
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", c.out, "output path, written atomically");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shared-revenue Bertrand game: equilibria, fees and verification"};
  app.require_subcommand(1);
  Config c;
  auto* report = app.add_subcommand("report", "key prices, fees, equilibria and fee game");
  auto* region = app.add_subcommand("region-map", "outcome labels over a cost x fee lattice");
  auto* curves = app.add_subcommand("payoff-curves", "payoffs over prices or fees");
  auto* sweep = app.add_subcommand("fee-sweep", "equilibrium payoffs over fees and the optimal fee");
  auto* ver = app.add_subcommand("verify", "compare analytic equilibria with the grid oracle");
  for (auto* s : {report, region, curves, sweep, ver}) shared_flags(s, c);
  region->add_option("--axis", c.axis, "cr or cs");
  region->add_option("--x-n", c.x_n, "cost lattice size");
  curves->add_option("--mode", c.mode, "p or alpha");
  ver->add_option("--perturb-fee", c.perturb_fee, "shift every threshold fee (fault injection)");
  ver->add_option("--samples", c.samples, "number of cost pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    if (report->parsed()) return cmd_report(c);
    if (region->parsed()) return cmd_region_map(c);
    if (curves->parsed()) return cmd_payoff_curves(c);
    if (sweep->parsed()) return cmd_fee_sweep(c);
    if (ver->parsed()) return cmd_verify(c);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NoStayRegion& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
