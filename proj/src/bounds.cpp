#include "gaplab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gaplab {

namespace {

const double kNan = std::numeric_limits<double>::quiet_NaN();

double log2_4t(double t) { return std::log2(4.0 * t); }

}  // namespace

int reduction_length(double t) {
  if (t < 1.0) throw std::invalid_argument("reduction_length: t must be >= 1");
  const double l2 = log2_4t(t);
  return static_cast<int>(std::ceil(2.0 * l2 + 1.5 * std::sqrt(l2)));
}

int reduction_length_legacy(double t) {
  if (t < 1.0) throw std::invalid_argument("reduction_length: t must be >= 1");
  return static_cast<int>(std::ceil(2.5 * log2_4t(t)));
}

bool reduction_inequality_check(int l, double t) {
  if (l < 1) throw std::invalid_argument("reduction_inequality_check: l < 1");
  const long double lhs =
      6.0L * static_cast<long double>(t) * static_cast<long double>(t) /
      std::exp2(static_cast<long double>(l));
  const long double rhs = 0.5L / std::sqrt(static_cast<long double>(l));
  return lhs <= rhs;
}

ReductionSweepResult reduction_sweep(std::uint64_t t_max) {
  ReductionSweepResult res;
  res.t_max = t_max;
  res.improved_ok = true;
  res.legacy_ok = true;
  std::uint64_t last_not_shorter = 0;
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    const double td = static_cast<double>(t);
    const int li = reduction_length(td);
    const int ll = reduction_length_legacy(td);
    if (!reduction_inequality_check(li, td)) res.improved_ok = false;
    if (!reduction_inequality_check(ll, td)) res.legacy_ok = false;
    if (li < ll && res.first_shorter_t == 0) res.first_shorter_t = t;
    if (li >= ll) last_not_shorter = t;
  }
  res.strictly_shorter_from =
      last_not_shorter >= t_max ? 0 : last_not_shorter + 1;
  return res;
}

double lambert_w_minus1(double x) {
  const double branch_point = -std::exp(-1.0);
  if (!(x > branch_point) || !(x < 0.0)) {
    if (x == branch_point) return -1.0;
    throw std::domain_error("lambert_w_minus1: x outside (-1/e, 0)");
  }
  // x = -e^{-u-1} gives u >= 0; the published lower bound -1 - sqrt(2u) - u
  // starts the iteration inside the lower branch
  const double u = -std::log(-x) - 1.0;
  double w = -1.0 - std::sqrt(2.0 * u) - u;
  for (int it = 0; it < 100; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double denom =
        ew * (w + 1.0) - (w + 2.0) * f / (2.0 * (w + 1.0));
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-14 * (1.0 + std::abs(w))) break;
  }
  return w;
}

std::vector<LambertBoundCheck> lambert_bound_grid(
    const std::vector<double>& xs) {
  std::vector<LambertBoundCheck> out;
  out.reserve(xs.size());
  for (double x : xs) {
    if (x <= 0.0) throw std::invalid_argument("lambert_bound_grid: x <= 0");
    LambertBoundCheck c;
    c.x = x;
    c.w_value = lambert_w_minus1(-std::exp(-x - 1.0));
    c.lower_bound = -1.0 - std::sqrt(2.0 * x) - x;
    c.ok = c.w_value >= c.lower_bound - 1e-12;
    out.push_back(c);
  }
  return out;
}

ReductionSolveCheck reduction_solve_check(double t) {
  if (t < 2.0) {
    throw std::invalid_argument("reduction_solve_check: t must be >= 2");
  }
  ReductionSolveCheck c;
  c.t = t;
  const double a = 1.0 / (2.0 * std::log(2.0));
  const double b = 2.0 * log2_4t(t);
  c.y = -a * lambert_w_minus1(-std::exp(-b / a) / a);
  c.equation_residual = std::abs(c.y - a * std::log(c.y) - b);
  c.cap = b + 1.5 * std::sqrt(log2_4t(t));
  const double x = b / a + std::log(a) - 1.0;
  c.chained_upper = a * (1.0 + std::sqrt(2.0 * x) + x);
  c.y_below_cap = c.y <= c.cap + 1e-9;
  c.chain_below_cap = c.chained_upper <= c.cap + 1e-9;
  return c;
}

GapBounds gap_bounds(int n, double t) {
  if (n < 1 || t < 1.0) {
    throw std::invalid_argument("gap_bounds: need n >= 1 and t >= 1");
  }
  GapBounds b;
  b.n = n;
  b.t = t;
  const double nd = n;
  const double two_2n = std::exp2(2.0 * nd);
  b.unconditional_delta = 1.0 / (120000.0 * std::pow(nd, 4.0) * two_2n);
  b.unconditional_g = 1.0 - 1.0 / (120000.0 * std::pow(nd, 5.0) * two_2n);
  b.legacy_delta = 1.0 / (nd * std::pow(5.0 * std::exp(1.0), nd));
  b.legacy_g = 1.0 - b.legacy_delta / nd;
  b.formulas_applicable = t >= 2.0;
  b.reduction_applicable = b.formulas_applicable && n >= reduction_length(t);
  if (b.reduction_applicable) {
    const double lg = std::log(t);
    const double expo = 4.0 + 3.0 / std::sqrt(std::log2(t));
    const double body = std::pow(lg, 5.0) * std::pow(t, expo);
    b.local_g = 1.0 - 1.0 / (1e13 * nd * body);
    b.brickwork_g = 1.0 - 1.0 / (3e13 * body);
  } else {
    b.local_g = kNan;
    b.brickwork_g = kNan;
  }
  return b;
}

DesignDepth design_depth(int n, double t, double epsilon) {
  if (n < 1 || t < 1.0 || epsilon <= 0.0) {
    throw std::invalid_argument("design_depth: bad parameters");
  }
  DesignDepth d;
  d.n = n;
  d.t = t;
  d.epsilon = epsilon;
  d.applicable = t >= 2.0 && n >= reduction_length(t);
  if (!d.applicable) {
    d.local_depth = kNan;
    d.brickwork_depth = kNan;
    d.headline_ratio = kNan;
    return d;
  }
  const double nd = n;
  const double expo = 4.0 + 3.0 / std::sqrt(std::log2(t));
  const double body = 1e13 * std::pow(std::log(t), 5.0) * std::pow(t, expo);
  const double tail = 2.0 * nd * t + std::log2(1.0 / epsilon);
  d.local_depth = std::ceil(body * nd * tail);
  d.brickwork_depth = std::ceil(body * tail);
  d.headline_ratio = d.local_depth / (nd * std::pow(t, 5.0));
  return d;
}

double comparison_gap(int n, EtaMode mode) {
  if (n < 2) throw std::invalid_argument("comparison_gap: n must be >= 2");
  const double nd = n;
  const double d = 9.0 * nd;
  const double eta = mode == EtaMode::GeneratorCount24 ? 1.0 / (24.0 * nd)
                                                       : 1.0 / (11520.0 * nd);
  return eta / (d * d);
}

double clifford_walk_gap_bound(int n) {
  if (n < 2) throw std::invalid_argument("clifford_walk_gap_bound: n < 2");
  return 1.0 - 1.0 / (2000.0 * std::pow(static_cast<double>(n), 3.0));
}

bool comparison_gap_consistent(int n) {
  return comparison_gap(n, EtaMode::GeneratorCount24) >=
         1.0 - clifford_walk_gap_bound(n);
}

double layer_count(int n) {
  return 6000.0 * std::pow(static_cast<double>(n), 4.0);
}

bool layer_count_sufficient(int n) {
  if (n < 2) throw std::invalid_argument("layer_count_sufficient: n < 2");
  const long double nd = n;
  const long double kn = 6000.0L * nd * nd * nd * nd;
  const long double lhs_log = kn * std::log1p(-1.0L / (2000.0L * nd * nd * nd));
  const long double rhs_log =
      -std::log(2.0L) - std::log(std::exp2(2.0L * nd) - 1.0L);
  return lhs_log <= rhs_log;
}

bool gap_denominator_arithmetic(int n) {
  if (n < 1) throw std::invalid_argument("gap_denominator_arithmetic: n < 1");
  const long double nd = n;
  const long double n4 = nd * nd * nd * nd;
  const long double two_2n = std::exp2(2.0L * nd);
  const long double lhs = 8.0L * (2.0L * 6000.0L * n4 + 1.0L) * (two_2n - 1.0L);
  const long double rhs = 120000.0L * n4 * two_2n;
  return lhs <= rhs;
}

double sigma_gap_bound(int n) {
  return 1.0 - 1.5 / (std::exp2(2.0 * n) - 1.0);
}

double sigma_gap_bound_sharp(int n) {
  return std::sqrt(1.0 - 3.0 / (std::exp2(2.0 * n) - 1.0));
}

double brickwork_conversion_bound(double delta) {
  if (delta < 0.0) {
    throw std::invalid_argument("brickwork_conversion_bound: delta < 0");
  }
  return std::sqrt(1.0 / (delta / 4.0 + 1.0));
}

ExponentDecomposition exponent_decomposition_old() {
  ExponentDecomposition d;
  d.terms = {{"gap-to-design conversion", 1.0},
             {"orthogonality square", 2.0},
             {"chain reduction", 0.5},
             {"staircase rate", std::log2(5.0)},
             {"walk counting", std::log2(std::exp(1.0))}};
  d.total = d.terms[0].value + (d.terms[1].value + d.terms[2].value) *
                                   (d.terms[3].value + d.terms[4].value);
  return d;
}

ExponentDecomposition exponent_decomposition_new(double t) {
  if (t < 2.0) {
    throw std::invalid_argument("exponent_decomposition_new: t must be >= 2");
  }
  ExponentDecomposition d;
  d.terms = {{"gap-to-design conversion", 1.0},
             {"orthogonality square", 2.0},
             {"chain reduction", 1.5 / std::sqrt(std::log2(t))},
             {"unconditional rate", 2.0}};
  d.total = d.terms[0].value +
            (d.terms[1].value + d.terms[2].value) * d.terms[3].value;
  return d;
}

namespace {

// brickwork depth formula without the hypothesis gate, used for inversion
double raw_brickwork_depth(int n, double t, double epsilon) {
  const double expo = 4.0 + 3.0 / std::sqrt(std::log2(t));
  const double body = 1e13 * std::pow(std::log(t), 5.0) * std::pow(t, expo);
  return body * (2.0 * n * t + std::log2(1.0 / epsilon));
}

}  // namespace

ComplexityGrowth complexity_growth_bound(double depth, int n) {
  if (depth < 1.0 || n < 1) {
    throw std::invalid_argument("complexity_growth_bound: bad parameters");
  }
  ComplexityGrowth g;
  g.depth = depth;
  const double eps0 = 0.01;
  if (raw_brickwork_depth(n, 2.0, eps0) > depth) {
    g.t_of_depth = 2.0;
    g.exponent = 1.0 / 8.0;
    g.value = std::pow(depth, g.exponent);
    g.within_horizon = reduction_length(2.0) <= n;
    return g;
  }
  double lo = 2.0, hi = 4.0;
  while (raw_brickwork_depth(n, hi, eps0) <= depth) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (raw_brickwork_depth(n, mid, eps0) <= depth) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  g.t_of_depth = lo;
  g.exponent = 1.0 / (5.0 + 3.0 / std::sqrt(std::log2(lo)));
  g.value = std::pow(depth, g.exponent);
  g.within_horizon = reduction_length(lo) <= n;
  return g;
}

std::vector<BoundSheetRow> bound_sheet(const std::vector<int>& ns,
                                       const std::vector<double>& ts,
                                       double epsilon) {
  std::vector<BoundSheetRow> rows;
  rows.reserve(ns.size() * ts.size());
  for (int n : ns) {
    for (double t : ts) {
      BoundSheetRow r;
      r.n = n;
      r.t = t;
      r.epsilon = epsilon;
      r.l_improved = reduction_length(t);
      r.l_legacy = reduction_length_legacy(t);
      r.reduction_ok_improved = reduction_inequality_check(r.l_improved, t);
      r.reduction_ok_legacy = reduction_inequality_check(r.l_legacy, t);
      const GapBounds gb = gap_bounds(n, t);
      r.unconditional_g = gb.unconditional_g;
      r.unconditional_delta = gb.unconditional_delta;
      r.legacy_delta = gb.legacy_delta;
      r.local_g = gb.local_g;
      r.brickwork_g = gb.brickwork_g;
      const DesignDepth dd = design_depth(n, t, epsilon);
      r.local_depth = dd.local_depth;
      r.brickwork_depth = dd.brickwork_depth;
      r.clifford_walk_bound = clifford_walk_gap_bound(std::max(n, 2));
      r.k_layers = layer_count(n);
      r.sigma_bound = sigma_gap_bound(n);
      r.old_exponent = exponent_decomposition_old().total;
      r.new_exponent = t >= 2.0 ? exponent_decomposition_new(t).total : kNan;
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace gaplab
