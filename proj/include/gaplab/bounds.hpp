#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gaplab {

// Reduction lengths for shrinking a chain instance to a fixed-size one.
// The improved form is ceil(2*log2(4t) + 1.5*sqrt(log2(4t))); the legacy
// form is ceil(2.5*log2(4t)).
int reduction_length(double t);
int reduction_length_legacy(double t);

// 6 t^2 / 2^l <= (1/2) l^{-1/2}, the condition a reduction length must meet.
bool reduction_inequality_check(int l, double t);

struct ReductionSweepResult {
  std::uint64_t t_max = 0;
  bool improved_ok = false;
  bool legacy_ok = false;
  // smallest t whose improved length is strictly below the legacy length
  std::uint64_t first_shorter_t = 0;
  // smallest t from which the improved length stays strictly below the
  // legacy length for every larger t in the sweep
  std::uint64_t strictly_shorter_from = 0;
};
ReductionSweepResult reduction_sweep(std::uint64_t t_max);

// Lower branch of Lambert's W on (-1/e, 0), solved by Halley iteration to
// about 1e-13 relative accuracy.
double lambert_w_minus1(double x);

struct LambertBoundCheck {
  double x = 0.0;
  double w_value = 0.0;
  double lower_bound = 0.0;  // -1 - sqrt(2x) - x
  bool ok = false;
};
// Checks W_{-1}(-e^{-x-1}) >= -1 - sqrt(2x) - x on a grid of positive x.
std::vector<LambertBoundCheck> lambert_bound_grid(const std::vector<double>& xs);

struct ReductionSolveCheck {
  double t = 0.0;
  double y = 0.0;                  // exact solution of y - a*ln(y) = 2*log2(4t)
  double equation_residual = 0.0;  // |y - a*ln(y) - 2*log2(4t)|
  double cap = 0.0;                // 2*log2(4t) + 1.5*sqrt(log2(4t))
  double chained_upper = 0.0;      // upper estimate routed through the W bound
  bool y_below_cap = false;
  bool chain_below_cap = false;
};
ReductionSolveCheck reduction_solve_check(double t);

struct GapBounds {
  int n = 0;
  double t = 0.0;
  double unconditional_g = 0.0;      // 1 - 1/(120000 n^5 2^{2n})
  double unconditional_delta = 0.0;  // 1/(120000 n^4 2^{2n})
  double legacy_delta = 0.0;         // 1/(n (5e)^n)
  double legacy_g = 0.0;             // 1 - legacy_delta / n
  bool reduction_applicable = false; // n >= reduction_length(t)
  bool formulas_applicable = false;  // t >= 2, so the log terms are defined
  double local_g = 0.0;              // NaN when not applicable
  double brickwork_g = 0.0;          // NaN when not applicable
};
GapBounds gap_bounds(int n, double t);

struct DesignDepth {
  int n = 0;
  double t = 0.0;
  double epsilon = 0.0;
  bool applicable = false;
  double local_depth = 0.0;      // NaN when not applicable
  double brickwork_depth = 0.0;  // NaN when not applicable
  double headline_ratio = 0.0;   // local_depth / (n t^5), NaN when n/a
};
DesignDepth design_depth(int n, double t, double epsilon);

// Probability weight assigned to the least likely generator in the
// generator-walk comparison argument.
enum class EtaMode { GeneratorCount24, GroupOrder11520 };

double comparison_gap(int n, EtaMode mode);  // eta / d^2 with d = 9n
double clifford_walk_gap_bound(int n);       // 1 - 1/(2000 n^3)
bool comparison_gap_consistent(int n);       // 1/(1944 n^3) >= 1/(2000 n^3)

// (1 - 1/(2000 n^3))^{6000 n^4} <= (1/2) / (2^{2n} - 1), checked in the log
// domain.
bool layer_count_sufficient(int n);
double layer_count(int n);  // 6000 n^4

// 8 (2*6000 n^4 + 1)(2^{2n} - 1) <= 120000 n^4 2^{2n}
bool gap_denominator_arithmetic(int n);

double sigma_gap_bound(int n);         // 1 - 1.5/(2^{2n} - 1)
double sigma_gap_bound_sharp(int n);   // sqrt(1 - 3/(2^{2n} - 1))
double brickwork_conversion_bound(double delta);  // sqrt(1/(delta/4 + 1))

struct ExponentTerm {
  std::string label;
  double value = 0.0;
};
struct ExponentDecomposition {
  std::vector<ExponentTerm> terms;
  double total = 0.0;
};
ExponentDecomposition exponent_decomposition_old();
ExponentDecomposition exponent_decomposition_new(double t);

struct ComplexityGrowth {
  double depth = 0.0;
  double t_of_depth = 0.0;
  double exponent = 0.0;
  double value = 0.0;  // depth^exponent
  bool within_horizon = false;
};
ComplexityGrowth complexity_growth_bound(double depth, int n);

struct BoundSheetRow {
  int n = 0;
  double t = 0.0;
  double epsilon = 0.0;
  int l_improved = 0;
  int l_legacy = 0;
  bool reduction_ok_improved = false;
  bool reduction_ok_legacy = false;
  double unconditional_g = 0.0;
  double unconditional_delta = 0.0;
  double legacy_delta = 0.0;
  double local_g = 0.0;
  double brickwork_g = 0.0;
  double local_depth = 0.0;
  double brickwork_depth = 0.0;
  double clifford_walk_bound = 0.0;
  double k_layers = 0.0;
  double sigma_bound = 0.0;
  double old_exponent = 0.0;
  double new_exponent = 0.0;  // NaN for t < 2
};
std::vector<BoundSheetRow> bound_sheet(const std::vector<int>& ns,
                                       const std::vector<double>& ts,
                                       double epsilon);

}  // namespace gaplab
