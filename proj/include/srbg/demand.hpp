#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "srbg/numeric.hpp"

namespace srbg {

struct NonNormalizable : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Samples in raw units; q_at_zero and p_max set the normalization.
struct RawDemand {
  double p_max = 1.0;
  double q_at_zero = 1.0;
  std::vector<std::pair<double, double>> samples;
};

namespace detail {

// Concave C1 piecewise quadratic through the nodes. On each interval the
// derivative runs linearly d_i -> s_i at a knot xi_i, then s_i -> d_{i+1}.
struct Table {
  std::vector<double> p, q, d, s, knot;

  double eval(double x) const {
    auto it = std::upper_bound(p.begin(), p.end(), x);
    std::size_t i = it == p.begin() ? 0 : static_cast<std::size_t>(it - p.begin()) - 1;
    if (i + 1 >= p.size()) return q.back();
    double h = p[i + 1] - p[i];
    double xi = knot[i];
    double u = x - p[i];
    double left = xi - p[i];
    if (u <= left) {
      if (left <= 0.0) return q[i];
      return q[i] + d[i] * u + (s[i] - d[i]) * u * u / (2.0 * left);
    }
    double qk = q[i] + left * (d[i] + s[i]) / 2.0;
    double right = h - left;
    double v = x - xi;
    return qk + s[i] * v + (d[i + 1] - s[i]) * v * v / (2.0 * right);
  }
};

inline std::shared_ptr<const Table> build_table(std::vector<double> p, std::vector<double> q) {
  auto t = std::make_shared<Table>();
  std::size_t n = p.size();
  t->p = std::move(p);
  t->q = std::move(q);
  t->s.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) t->s[i] = (t->q[i + 1] - t->q[i]) / (t->p[i + 1] - t->p[i]);
  t->d.resize(n);
  if (n == 2) {
    t->d[0] = t->d[1] = t->s[0];
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) t->d[i] = 0.5 * (t->s[i - 1] + t->s[i]);
    double s0 = t->s[0], s1 = t->s[1];
    t->d[0] = s0 + std::max(0.0, std::min(0.5 * (s0 - s1), -0.5 * s0));
    double sl = t->s[n - 2], sm = t->s[n - 3];
    t->d[n - 1] = sl - std::max(0.0, 0.5 * (sm - sl));
  }
  t->knot.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double h = t->p[i + 1] - t->p[i];
    double span = t->d[i] - t->d[i + 1];
    double lam = span > 1e-15 ? (t->s[i] - t->d[i + 1]) / span : 0.5;
    lam = std::clamp(lam, 0.0, 1.0);
    t->knot[i] = t->p[i] + lam * h;
  }
  return t;
}

}  // namespace detail

/// Normalized demand on [0,1]; linear q(p) = 1 - p or an interpolated table.
class DemandCurve {
 public:
  enum class Kind { linear, tabulated };

  DemandCurve() = default;

  static DemandCurve linear() { return DemandCurve{}; }

  /// Interpolates normalized samples; the first sample must be at p = 0 and the last at p = 1.
  static DemandCurve tabulated(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 2) throw NonNormalizable("tabulated demand needs at least two samples");
    std::sort(samples.begin(), samples.end());
    std::vector<double> p, q;
    for (auto& [x, y] : samples) {
      p.push_back(x);
      q.push_back(y);
    }
    DemandCurve c;
    c.kind_ = Kind::tabulated;
    c.samples_ = std::move(samples);
    c.table_ = detail::build_table(std::move(p), std::move(q));
    return c;
  }

  Kind kind() const { return kind_; }
  bool is_linear() const { return kind_ == Kind::linear; }
  const std::vector<std::pair<double, double>>& samples() const { return samples_; }

  double operator()(double p) const {
    if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) throw OutOfDomain("price " + std::to_string(p) + " outside [0,1]");
    p = std::clamp(p, 0.0, 1.0);
    if (kind_ == Kind::linear) return 1.0 - p;
    return std::max(0.0, table_->eval(p));
  }

  double slope(double p) const {
    if (kind_ == Kind::linear) return -1.0;
    return num::derivative(*this, p);
  }

 private:
  Kind kind_ = Kind::linear;
  std::vector<std::pair<double, double>> samples_;
  std::shared_ptr<const detail::Table> table_;
};

inline double evaluate(const DemandCurve& curve, double p) { return curve(p); }

inline constexpr double endpoint_tol = 1e-9;

/// Divides prices by p_max and quantities by q(0). Collinear samples on 1 - p give the linear kind.
inline DemandCurve normalize(const RawDemand& raw) {
  if (!(raw.p_max > 0.0)) throw NonNormalizable("p_max > 0 violated");
  if (!(raw.q_at_zero > 0.0)) throw NonNormalizable("q(0) > 0 violated");
  if (raw.samples.size() < 2) throw NonNormalizable("need at least two samples");
  std::vector<std::pair<double, double>> s;
  for (auto [p, q] : raw.samples) {
    if (p < 0.0 || p > raw.p_max * (1.0 + 1e-12)) throw NonNormalizable("sample price outside [0, p_max]");
    s.emplace_back(p / raw.p_max, q / raw.q_at_zero);
  }
  std::sort(s.begin(), s.end());
  if (std::abs(s.front().first) > endpoint_tol || std::abs(s.front().second - 1.0) > endpoint_tol)
    throw NonNormalizable("first sample must be (0, q(0))");
  if (std::abs(s.back().first - 1.0) > endpoint_tol || std::abs(s.back().second) > endpoint_tol)
    throw NonNormalizable("q(p_max) = 0 violated");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i].second < s[i - 1].second) || !(s[i].first > s[i - 1].first))
      throw NonNormalizable("demand not strictly decreasing at samples " + std::to_string(i - 1) + "," +
                            std::to_string(i));
  s.front() = {0.0, 1.0};
  s.back() = {1.0, 0.0};
  bool on_line = std::all_of(s.begin(), s.end(), [](auto& x) { return std::abs(x.second - (1.0 - x.first)) <= 1e-12; });
  if (on_line) return DemandCurve::linear();
  return DemandCurve::tabulated(std::move(s));
}

/// Inverse of normalize for a given scale.
inline RawDemand denormalize(const DemandCurve& curve, double p_max, double q_at_zero) {
  RawDemand raw{p_max, q_at_zero, {}};
  if (curve.is_linear()) {
    raw.samples = {{0.0, q_at_zero}, {p_max, 0.0}};
  } else {
    for (auto [p, q] : curve.samples()) raw.samples.emplace_back(p * p_max, q * q_at_zero);
  }
  return raw;
}

struct Violation {
  std::string invariant;
  std::vector<std::size_t> samples;  // witnessing sample indices (empty for probe-grid findings)
};

struct DemandReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks normalization, strict monotonicity and strict concavity of the samples,
/// then re-checks monotonicity and concavity of the interpolant on a 10,000-point probe.
inline DemandReport validate(const DemandCurve& curve, std::size_t probe = 10000) {
  DemandReport r;
  if (curve.is_linear()) return r;
  const auto& s = curve.samples();
  if (std::abs(s.front().first) > endpoint_tol || std::abs(s.front().second - 1.0) > endpoint_tol)
    r.violations.push_back({"q(0) = 1", {0}});
  if (std::abs(s.back().first - 1.0) > endpoint_tol || std::abs(s.back().second) > endpoint_tol)
    r.violations.push_back({"q(1) = 0", {s.size() - 1}});
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i].second < s[i - 1].second)) r.violations.push_back({"strictly decreasing", {i - 1, i}});
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    double s0 = (s[i].second - s[i - 1].second) / (s[i].first - s[i - 1].first);
    double s1 = (s[i + 1].second - s[i].second) / (s[i + 1].first - s[i].first);
    if (!(s1 - s0 < 0.0)) r.violations.push_back({"strictly concave", {i - 1, i, i + 1}});
  }
  if (!r.ok() || probe < 3) return r;
  auto xs = num::linspace(0.0, 1.0, probe);
  std::vector<double> ys(probe);
  for (std::size_t i = 0; i < probe; ++i) ys[i] = curve(xs[i]);
  for (std::size_t i = 1; i < probe; ++i)
    if (!(ys[i] < ys[i - 1])) {
      r.violations.push_back({"interpolant strictly decreasing", {}});
      break;
    }
  for (std::size_t i = 1; i + 1 < probe; ++i)
    if (ys[i + 1] - 2.0 * ys[i] + ys[i - 1] > 1e-12) {
      r.violations.push_back({"interpolant concave", {}});
      break;
    }
  return r;
}

}  // namespace srbg
