#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gaplab/coupling.hpp"
#include "gaplab/dense.hpp"
#include "gaplab/haar.hpp"
#include "gaplab/rng.hpp"
#include "gaplab/walks.hpp"

using namespace gaplab;

TEST_CASE("replica identity holds exactly on small matrices") {
  const ReplicaCheck id = replica_check(Matrix::Identity(4, 4));
  CHECK(id.direct.real() == doctest::Approx(4.0));
  CHECK(id.difference <= 1e-12);

  Matrix d2 = Matrix::Zero(2, 2);
  d2(0, 0) = 1.0;
  d2(1, 1) = 2.0;
  const ReplicaCheck diag = replica_check(d2);
  CHECK(diag.direct.real() == doctest::Approx(5.0));
  CHECK(diag.via_swap.real() == doctest::Approx(5.0));
  CHECK(diag.difference <= 1e-12);

  auto g = make_engine(5);
  Matrix rnd(8, 8);
  for (Index i = 0; i < 8; ++i) {
    for (Index j = 0; j < 8; ++j) {
      rnd(i, j) = Complex(gaussian(g), gaussian(g));
    }
  }
  CHECK(replica_check(rnd).difference <= 1e-10);

  CHECK_THROWS_AS((void)replica_check(Matrix::Zero(65, 65)),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)replica_check(Matrix::Zero(3, 4)),
                  std::invalid_argument);
}

TEST_CASE("polar correction attains the trace-norm maximum") {
  auto g = make_engine(21);
  Matrix w(2, 2);
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) {
      w(i, j) = Complex(gaussian(g), gaussian(g));
    }
  }
  const Matrix v = polar_unitary(w.adjoint());
  const double attained = (v * w).trace().real();
  CHECK(attained == doctest::Approx(schatten_norm(w, Schatten::One)).epsilon(1e-12));
  CHECK(attained >= w.trace().real() - 1e-12);
}

TEST_CASE("coupled step keeps equal inputs equal") {
  auto g = make_engine(7);
  const Matrix u = sample_haar(4, 99);
  const CoupledPair p = coupled_step(u, u, 2, g);
  CHECK((p.x - p.y).norm() <= 1e-13);
  CHECK((p.x.adjoint() * p.x - Matrix::Identity(4, 4)).norm() <= 1e-12);
}

TEST_CASE("coupled step ratio depends only on the relative rotation") {
  auto g1 = make_engine(11);
  auto g2 = make_engine(11);
  const Matrix r = sample_haar(4, 1);
  const Matrix base = sample_haar(4, 2);
  const Matrix id = Matrix::Identity(4, 4);
  const CoupledPair p1 = coupled_step(r, id, 2, g1);
  const CoupledPair p2 = coupled_step(r * base, base, 2, g2);
  const double q1 = (p1.x - p1.y).squaredNorm() / (r - id).squaredNorm();
  const double q2 =
      (p2.x - p2.y).squaredNorm() / (r * base - base).squaredNorm();
  CHECK(std::abs(q1 - q2) <= 1e-12);
}

TEST_CASE("coupled step validates its inputs") {
  auto g = make_engine(1);
  CHECK_THROWS_AS((void)coupled_step(Matrix::Identity(32, 32),
                                     Matrix::Identity(32, 32), 5, g),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)coupled_step(Matrix::Identity(4, 4),
                                     Matrix::Identity(8, 8), 2, g),
                  std::invalid_argument);
}

TEST_CASE("two qubit contraction matches the closed-form mean square") {
  const CouplingTrace tr = contraction_estimate(2, 1e-4, 10000, 1);
  CHECK(tr.contraction_target == doctest::Approx(0.8));
  CHECK(tr.stderr_of_mean < 0.005);
  CHECK(std::abs(tr.mean - tr.contraction_target) <=
        3.0 * tr.stderr_of_mean + 0.02);
  CHECK(std::abs(tr.mean_identity_v - 1.0) <= 1e-12);
  CHECK(tr.mean <= tr.mean_identity_v);
  CHECK(std::abs(tr.mean - tr.mean_taylor) <= 10.0 * tr.epsilon);
  CHECK_FALSE(tr.advisory_more_samples);
  CHECK(int(tr.ratios.size()) == tr.samples);
  CHECK(int(tr.subseeds.size()) == tr.samples);
  double max_ratio = 0.0;
  for (double v : tr.ratios) {
    CHECK(v >= 0.0);
    max_ratio = std::max(max_ratio, v);
  }
  CHECK(max_ratio <= 1.0 + 1e-12);
  CHECK(tr.twirl.within_band);
}

TEST_CASE("three qubit contraction matches the closed-form mean square") {
  const CouplingTrace tr = contraction_estimate(3, 1e-4, 10000, 1);
  CHECK(tr.contraction_target == doctest::Approx(1.0 - 3.0 / 63.0));
  CHECK(std::abs(tr.mean - tr.contraction_target) <=
        3.0 * tr.stderr_of_mean + 0.02);
  CHECK(std::abs(tr.mean_identity_v - 1.0) <= 1e-12);
  CHECK(tr.twirl.within_band);
}

TEST_CASE("single qubit contraction is exact") {
  const CouplingTrace tr = contraction_estimate(1, 1e-4, 16, 5);
  CHECK(tr.contraction_target == doctest::Approx(0.0));
  CHECK(tr.mean <= 1e-16);
}

TEST_CASE("contraction estimate is deterministic per seed") {
  const CouplingTrace a = contraction_estimate(2, 1e-4, 500, 17);
  const CouplingTrace b = contraction_estimate(2, 1e-4, 500, 17);
  CHECK(a.mean == b.mean);
  for (int s = 0; s < a.samples; ++s) {
    CHECK(a.ratios[s] == b.ratios[s]);
    CHECK(a.subseeds[s] == b.subseeds[s]);
  }
}

TEST_CASE("contraction estimate validates its inputs") {
  CHECK_THROWS_AS((void)contraction_estimate(4, 1e-4, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)contraction_estimate(2, 0.0, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)contraction_estimate(2, 1e-4, 7, 1),
                  std::invalid_argument);
}

TEST_CASE("shrinking epsilon stabilizes the estimate") {
  const CouplingTrace a = contraction_estimate(2, 1e-3, 4000, 3);
  const CouplingTrace b = contraction_estimate(2, 1e-4, 4000, 3);
  const CouplingTrace c = contraction_estimate(2, 1e-5, 4000, 3);
  const double d10 = std::abs(a.mean - b.mean);
  const double d21 = std::abs(b.mean - c.mean);
  CHECK(d10 <= 1e-8);
  CHECK(d21 <= 0.1 * d10);
  const double drift_a = std::abs(a.mean - a.mean_taylor);
  const double drift_b = std::abs(b.mean - b.mean_taylor);
  const double drift_c = std::abs(c.mean - c.mean_taylor);
  CHECK(drift_b <= 0.5 * drift_a);
  CHECK(drift_c <= 0.5 * drift_b);
}

TEST_CASE("twirl coefficients separate from one regression") {
  const TwirlEstimate est = twirl_decomposition(2, 6000, 9);
  CHECK(est.square_coeff_exact == doctest::Approx(0.4));
  CHECK(est.trace_coeff_exact == doctest::Approx(0.4));
  CHECK(est.within_band);
  CHECK(std::abs(est.square_coeff_hat - est.square_coeff_exact) <= 0.05);
  CHECK(std::abs(est.trace_coeff_hat - est.trace_coeff_exact) <= 0.05);

  const TwirlEstimate three = twirl_decomposition(3, 6000, 9);
  CHECK(three.square_coeff_exact == doctest::Approx(4.0 / 21.0));
  CHECK(three.trace_coeff_exact == doctest::Approx(10.0 / 21.0));
  CHECK(three.within_band);
}

TEST_CASE("decay formulas reproduce the constants at step zero") {
  const WassersteinDecay w = wasserstein_decay(2, 0, 1);
  CHECK(w.rate_sq == doctest::Approx(0.8));
  CHECK(w.rate == doctest::Approx(std::sqrt(0.8)));
  CHECK(w.distance_bound_pi == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(w.distance_bound_sqrt2 == doctest::Approx(2.0 * std::numbers::sqrt2));
  CHECK(w.distance_bound_sqrt2 < w.distance_bound_pi);

  const WassersteinDecay w2 = wasserstein_decay(2, 2, 1);
  CHECK(w2.distance_bound_pi ==
        doctest::Approx(0.8 * w.distance_bound_pi).epsilon(1e-12));
}

TEST_CASE("step count to reach a moment-norm target") {
  CHECK(steps_until_below(2, 2, 1e-6) == 146);
  CHECK(wasserstein_decay(2, 146, 2).moment_gap_bound ==
        doctest::Approx(9.531781e-07).epsilon(1e-5));
  CHECK(wasserstein_decay(2, 145, 2).moment_gap_bound > 1e-6);
  CHECK(steps_until_below(2, 2, 100.0) == 0);
  CHECK_THROWS_AS((void)steps_until_below(2, 2, 0.0), std::invalid_argument);
}

TEST_CASE("exact walk gap decays at least as fast as the coupling rate") {
  WalkSpec spec;
  spec.kind = WalkKind::Sigma;
  spec.n = 2;
  spec.t = 4;
  const GapReport r = spectral_gap(spec);
  CHECK(r.g_value <= wasserstein_decay(2, 1, 1).rate + 1e-12);
}
