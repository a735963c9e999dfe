#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gaplab/dense.hpp"

namespace gaplab {

struct CoupledPair {
  Matrix x;
  Matrix y;
};

// One coupled step of the conjugated single-qubit walk. Both inputs are
// multiplied by the same random circuit C' (U x 1) C with C, C' uniform
// group elements and U Haar on U(2); the x branch additionally receives the
// correction V chosen to maximize Re Tr[(V x 1) C x y^dagger C^dagger],
// which the polar unitary of the reduced adjoint attains.
CoupledPair coupled_step(const Matrix& x, const Matrix& y, int n,
                         std::mt19937_64& g);

struct ReplicaCheck {
  Complex direct;    // Tr[a^2]
  Complex via_swap;  // Tr[(a x a) F] with F the factor swap
  double difference = 0.0;
};
ReplicaCheck replica_check(const Matrix& a);

// Least-squares estimate of the two coefficients in the group average
//   E_C Tr[(reduce(C h C^dagger))^2] = square_coeff Tr[h^2]
//                                      + trace_coeff Tr[h]^2
// from sampled conjugations of mixed unit-Frobenius directions.
struct TwirlEstimate {
  int n = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  double square_coeff_hat = 0.0;
  double square_coeff_sigma = 0.0;
  double square_coeff_exact = 0.0;  // (2 - 1/2) / (2^n - 2^{-n})
  double trace_coeff_hat = 0.0;
  double trace_coeff_sigma = 0.0;
  double trace_coeff_exact = 0.0;   // (2^{2n-1} - 2) / (2^{2n} - 1)
  bool within_band = false;         // both estimates within 3 sigma
};
TwirlEstimate twirl_decomposition(int n, int samples, std::uint64_t seed);

struct CouplingTrace {
  int n = 0;
  double epsilon = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> ratios;  // |x' - y'|_F^2 / |x - y|_F^2 per sample
  std::vector<std::uint64_t> subseeds;  // per-sample substream seeds
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  double mean_identity_v = 0.0;  // same walk with the correction disabled
  double mean_taylor = 0.0;      // 1 - E[reduced square] / 2^{n-1}
  double contraction_target = 0.0;  // 1 - 3/(2^{2n} - 1)
  TwirlEstimate twirl;
  bool advisory_more_samples = false;  // 3 sigma wider than the check band
};

// Monte Carlo estimate of the mean squared contraction ratio of coupled
// trajectories at distance scale epsilon, with the twirl decomposition
// estimated from the same substream family.
CouplingTrace contraction_estimate(int n, double epsilon, int samples,
                                   std::uint64_t seed);

struct WassersteinDecay {
  int n = 0;
  int k = 0;
  int t = 1;
  double rate_sq = 0.0;  // 1 - 3/(2^{2n} - 1), mean squared ratio per step
  double rate = 0.0;     // sqrt(rate_sq), distance ratio per step
  double distance_bound_pi = 0.0;     // pi 2^{n/2} rate^k
  double distance_bound_sqrt2 = 0.0;  // sqrt(2) 2^{n/2} rate^k
  double moment_gap_bound = 0.0;      // 2 sqrt(2) t 2^{n/2} rate^k
};

// Closed-form decay values after k coupled steps. The pi constant is the
// announced bound, the sqrt(2) constant is what the derivation yields; the
// moment gap bound multiplies the distance by 2t.
WassersteinDecay wasserstein_decay(int n, int k, int t = 1);

// Smallest k whose moment gap bound falls below the target.
int steps_until_below(int n, int t, double target);

}  // namespace gaplab
