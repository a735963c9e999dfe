#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gaplab/bounds.hpp"

using namespace gaplab;

TEST_CASE("reduction lengths match the closed forms at spot values") {
  CHECK(reduction_length(4) == 11);
  CHECK(reduction_length_legacy(4) == 10);
  CHECK(reduction_length(1) == 7);
  CHECK(reduction_length(2) == 9);
  CHECK(reduction_length_legacy(2) == 8);
  CHECK(reduction_length(1024) == 30);
  CHECK(reduction_length_legacy(1024) == 30);
}

TEST_CASE("reduction inequality accepts both published lengths at t = 4") {
  CHECK(reduction_inequality_check(11, 4.0));
  CHECK(reduction_inequality_check(10, 4.0));
  CHECK_FALSE(reduction_inequality_check(6, 4.0));
  CHECK_FALSE(reduction_inequality_check(1, 2.0));
}

TEST_CASE("reduction sweep validates both length formulas up to 2^20") {
  const ReductionSweepResult sweep = reduction_sweep(std::uint64_t(1) << 20);
  CHECK(sweep.t_max == (std::uint64_t(1) << 20));
  CHECK(sweep.improved_ok);
  CHECK(sweep.legacy_ok);
  CHECK(sweep.first_shorter_t == 148);
  CHECK(sweep.strictly_shorter_from == 1352);
}

TEST_CASE("lambert lower branch reproduces closed-form points") {
  CHECK(lambert_w_minus1(-2.0 * std::exp(-2.0)) ==
        doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(lambert_w_minus1(-std::exp(-1.0)) == doctest::Approx(-1.0));
  CHECK(lambert_w_minus1(-3.0 * std::exp(-3.0)) ==
        doctest::Approx(-3.0).epsilon(1e-12));
  // w e^w returns the argument across the branch domain
  for (double x : {-0.3, -0.2, -0.1, -0.05, -0.01, -1e-4, -1e-8}) {
    const double w = lambert_w_minus1(x);
    CHECK(w <= -1.0);
    CHECK(w * std::exp(w) == doctest::Approx(x).epsilon(1e-11));
  }
  CHECK_THROWS_AS((void)lambert_w_minus1(0.1), std::domain_error);
  CHECK_THROWS_AS((void)lambert_w_minus1(-1.0), std::domain_error);
}

TEST_CASE("lambert lower bound holds on a dense grid") {
  std::vector<double> xs = {0.5, 1.0, 2.0, 5.0, 10.0};
  for (int i = 1; i <= 100; ++i) xs.push_back(0.25 * i);
  const auto checks = lambert_bound_grid(xs);
  REQUIRE(checks.size() == xs.size());
  for (const auto& c : checks) {
    CHECK(c.ok);
    CHECK(c.w_value >= c.lower_bound);
    CHECK(c.w_value <= -1.0);
  }
  // spot value against an independently computed reference
  CHECK(checks[0].w_value == doctest::Approx(-2.357676674).epsilon(1e-8));
  CHECK(checks[3].w_value == doctest::Approx(-8.090717405).epsilon(1e-8));
}

TEST_CASE("reduction length solve stays below the cap for every order") {
  for (double t = 2.0; t <= 4096.0; t *= 2.0) {
    const ReductionSolveCheck rc = reduction_solve_check(t);
    CHECK(rc.equation_residual <= 1e-10);
    CHECK(rc.y_below_cap);
    CHECK(rc.y <= rc.cap);
  }
  const ReductionSolveCheck r2 = reduction_solve_check(2.0);
  CHECK(r2.y == doctest::Approx(7.448472).epsilon(1e-6));
  CHECK(r2.cap == doctest::Approx(8.598076).epsilon(1e-6));
  const ReductionSolveCheck r8 = reduction_solve_check(8.0);
  CHECK(r8.y == doctest::Approx(11.779077).epsilon(1e-6));
  CHECK(r8.cap == doctest::Approx(13.354102).epsilon(1e-6));
}

TEST_CASE("chained upper estimate is weaker than the cap from order seven") {
  // the exact solve passes for all orders; the looser chained route does not,
  // which is why the sweep asserts only the exact statement
  CHECK(reduction_solve_check(2.0).chain_below_cap);
  CHECK(reduction_solve_check(4.0).chain_below_cap);
  CHECK(reduction_solve_check(6.0).chain_below_cap);
  CHECK_FALSE(reduction_solve_check(7.0).chain_below_cap);
  CHECK_FALSE(reduction_solve_check(8.0).chain_below_cap);
  CHECK_FALSE(reduction_solve_check(1024.0).chain_below_cap);
  const ReductionSolveCheck r7 = reduction_solve_check(7.0);
  CHECK(r7.chained_upper == doctest::Approx(12.913281).epsilon(1e-6));
  CHECK(r7.cap == doctest::Approx(12.903562).epsilon(1e-6));
}

TEST_CASE("unconditional gap bounds at two qubits") {
  const GapBounds gb = gap_bounds(2, 4.0);
  CHECK(gb.unconditional_g == doctest::Approx(1.0 - 1.0 / 61440000.0));
  CHECK(gb.unconditional_delta == doctest::Approx(1.0 / 30720000.0));
  const double five_e = 5.0 * std::exp(1.0);
  CHECK(gb.legacy_delta == doctest::Approx(1.0 / (2.0 * five_e * five_e)));
  CHECK(gb.legacy_g == doctest::Approx(1.0 - gb.legacy_delta / 2.0));
  CHECK_FALSE(gb.reduction_applicable);
  CHECK(std::isnan(gb.local_g));
  CHECK(std::isnan(gb.brickwork_g));
}

TEST_CASE("conditional gap bounds engage once the chain is long enough") {
  const GapBounds gb = gap_bounds(64, 16.0);
  CHECK(gb.reduction_applicable);
  CHECK(gb.formulas_applicable);
  CHECK(gb.local_g <= 1.0);
  CHECK(gb.brickwork_g <= 1.0);
  CHECK(gb.brickwork_g >= gb.local_g);
  // at small parameters the deficit is visible in double precision
  const GapBounds small = gap_bounds(16, 2.0);
  CHECK(small.reduction_applicable);
  CHECK(small.local_g < 1.0);
  CHECK(small.brickwork_g < 1.0);
  CHECK(small.local_g > 0.999);
}

TEST_CASE("design depths keep the qubit-count ratio between walk styles") {
  const DesignDepth dd = design_depth(64, 16.0, 0.01);
  CHECK(dd.applicable);
  CHECK(dd.local_depth / dd.brickwork_depth == doctest::Approx(64.0));
  CHECK(dd.headline_ratio ==
        doctest::Approx(dd.local_depth / (64.0 * std::pow(16.0, 5))));
  // depth grows additively in log(1/epsilon)
  const double d1 = design_depth(64, 16.0, 1e-2).brickwork_depth;
  const double d2 = design_depth(64, 16.0, 1e-4).brickwork_depth;
  const double d3 = design_depth(64, 16.0, 1e-6).brickwork_depth;
  CHECK(d2 > d1);
  CHECK(d3 > d2);
  CHECK(std::abs((d3 - d2) - (d2 - d1)) <= 1e-12 * d2 + 2.0);
  const DesignDepth shallow = design_depth(2, 16.0, 0.01);
  CHECK_FALSE(shallow.applicable);
  CHECK(std::isnan(shallow.local_depth));
}

TEST_CASE("generator comparison gap and the rounded walk bound") {
  CHECK(comparison_gap(2, EtaMode::GeneratorCount24) ==
        doctest::Approx(1.0 / 15552.0));
  CHECK(comparison_gap(2, EtaMode::GroupOrder11520) ==
        doctest::Approx(1.0 / 7464960.0));
  CHECK(clifford_walk_gap_bound(2) == doctest::Approx(1.0 - 1.0 / 16000.0));
  for (int n = 2; n <= 32; ++n) {
    CHECK(comparison_gap_consistent(n));
    CHECK(comparison_gap(n, EtaMode::GeneratorCount24) >=
          1.0 - clifford_walk_gap_bound(n));
  }
}

TEST_CASE("layer count suffices to halve the group distance target") {
  CHECK(layer_count(3) == doctest::Approx(486000.0));
  for (int n = 2; n <= 20; ++n) CHECK(layer_count_sufficient(n));
}

TEST_CASE("denominator arithmetic closes the unconditional bound") {
  for (int n = 1; n <= 64; ++n) CHECK(gap_denominator_arithmetic(n));
}

TEST_CASE("sigma and conversion bounds at small sizes") {
  CHECK(sigma_gap_bound(2) == doctest::Approx(0.9));
  CHECK(sigma_gap_bound_sharp(2) == doctest::Approx(std::sqrt(0.8)));
  CHECK(sigma_gap_bound_sharp(2) <= sigma_gap_bound(2));
  CHECK(brickwork_conversion_bound(2.0) == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(brickwork_conversion_bound(0.0) == doctest::Approx(1.0));
}

TEST_CASE("exponent decompositions reproduce both headline rates") {
  const ExponentDecomposition old_rate = exponent_decomposition_old();
  CHECK(old_rate.terms.size() == 5);
  CHECK(old_rate.total == doctest::Approx(10.411558).epsilon(1e-5));
  // conversion + (orthogonality + reduction) * (staircase + counting)
  CHECK(old_rate.total ==
        doctest::Approx(1.0 + 2.5 * (std::log2(5.0) +
                                     std::log2(std::exp(1.0)))));

  CHECK(exponent_decomposition_new(2.0).total == doctest::Approx(8.0));
  CHECK(exponent_decomposition_new(65536.0).total == doctest::Approx(5.75));
  CHECK(exponent_decomposition_new(std::pow(2.0, 64)).total ==
        doctest::Approx(5.375));
  double prev = 9.0;
  for (double t = 2.0; t <= 1e12; t *= 32.0) {
    const double cur = exponent_decomposition_new(t).total;
    CHECK(cur < prev);
    CHECK(cur > 5.0);
    prev = cur;
  }
  CHECK(exponent_decomposition_new(1e300).total < 5.1);
}

TEST_CASE("complexity growth keeps the inverse headline exponent") {
  const ComplexityGrowth cg = complexity_growth_bound(1000.0, 64);
  CHECK(cg.t_of_depth == doctest::Approx(2.0));
  CHECK(cg.exponent == doctest::Approx(0.125));
  CHECK(cg.value == doctest::Approx(std::pow(1000.0, 0.125)));
  CHECK(cg.within_horizon);
  const ComplexityGrowth big = complexity_growth_bound(1e30, 64);
  CHECK(big.t_of_depth >= 2.0);
  CHECK(big.exponent >= 0.125);
  CHECK(big.exponent < 0.2);
  CHECK(big.value == doctest::Approx(std::pow(1e30, big.exponent)));
  CHECK(big.value >= cg.value);
  // a chain too short for the reduction cannot certify the horizon
  CHECK_FALSE(complexity_growth_bound(10.0, 8).within_horizon);
}

TEST_CASE("bound sheet rows agree with the direct calls") {
  const auto rows = bound_sheet({2, 4}, {2.0, 8.0}, 0.01);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CHECK(row.l_improved == reduction_length(row.t));
    CHECK(row.l_legacy == reduction_length_legacy(row.t));
    CHECK(row.reduction_ok_improved);
    CHECK(row.reduction_ok_legacy);
    const GapBounds gb = gap_bounds(row.n, row.t);
    CHECK(row.unconditional_g == doctest::Approx(gb.unconditional_g));
    CHECK(row.legacy_delta == doctest::Approx(gb.legacy_delta));
    CHECK(row.clifford_walk_bound ==
          doctest::Approx(clifford_walk_gap_bound(row.n)));
    CHECK(row.k_layers == doctest::Approx(layer_count(row.n)));
    CHECK(row.sigma_bound == doctest::Approx(sigma_gap_bound(row.n)));
    CHECK(row.old_exponent == doctest::Approx(10.411558).epsilon(1e-5));
    CHECK(row.new_exponent ==
          doctest::Approx(exponent_decomposition_new(row.t).total));
  }
}
