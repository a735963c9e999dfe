#include "gaplab/coupling.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gaplab/clifford.hpp"
#include "gaplab/haar.hpp"
#include "gaplab/rng.hpp"

namespace gaplab {

namespace {

void validate_qubits(int n, int max_n, const char* where) {
  if (n < 1 || n > max_n) {
    throw std::invalid_argument(std::string(where) + ": n out of range");
  }
}

Index qubit_dim(int n) { return Index(1) << n; }

// a2 acting on the first qubit, identity on the rest
Matrix embed_first(const Matrix& a2, int n) {
  const Index rest = Index(1) << (n - 1);
  Matrix out = Matrix::Zero(qubit_dim(n), qubit_dim(n));
  for (Index a = 0; a < 2; ++a) {
    for (Index b = 0; b < 2; ++b) {
      for (Index r = 0; r < rest; ++r) {
        out(a * rest + r, b * rest + r) = a2(a, b);
      }
    }
  }
  return out;
}

Matrix exp_i_scaled(const Matrix& h, double eps) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) {
    throw SolverError("exp_i_scaled: eigendecomposition failed");
  }
  const Index d = h.rows();
  Matrix phases = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    phases(i, i) = std::polar(1.0, eps * es.eigenvalues()(i));
  }
  return es.eigenvectors() * phases * es.eigenvectors().adjoint();
}

// traceless hermitian direction with unit Frobenius norm
Matrix traceless_direction(Index d, std::mt19937_64& g) {
  Matrix a(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      a(i, j) = Complex(gaussian(g), gaussian(g));
    }
  }
  Matrix h = 0.5 * (a + a.adjoint());
  h -= (h.trace() / double(d)) * Matrix::Identity(d, d);
  const double norm = h.norm();
  if (norm < 1e-300) {
    throw SolverError("traceless_direction: degenerate draw");
  }
  return h / norm;
}

// partial trace over every qubit except the first (most significant) one
Matrix reduce_first(const Matrix& a, int n) {
  if (n == 1) {
    return a;
  }
  return partial_trace(a, {0}, {2, Index(1) << (n - 1)});
}

struct StepDraws {
  Matrix c;
  Matrix cp;
  Matrix u;
  Matrix v;
};

// draw order: inner group element, outer group element, single-qubit haar
StepDraws draw_step(const Matrix& x, const Matrix& y, int n,
                    std::mt19937_64& g) {
  StepDraws d;
  d.c = synthesize_unitary(sample_tableau(n, g));
  d.cp = synthesize_unitary(sample_tableau(n, g));
  d.u = sample_haar(2, g());
  const Matrix w = reduce_first(d.c * x * y.adjoint() * d.c.adjoint(), n);
  d.v = polar_unitary(w.adjoint());
  return d;
}

double square_of(const Matrix& w) {
  return (w * w).trace().real();
}

}  // namespace

CoupledPair coupled_step(const Matrix& x, const Matrix& y, int n,
                         std::mt19937_64& g) {
  validate_qubits(n, 4, "coupled_step");
  const Index dim = qubit_dim(n);
  if (x.rows() != dim || x.cols() != dim || y.rows() != dim ||
      y.cols() != dim) {
    throw std::invalid_argument("coupled_step: dimension mismatch");
  }
  const StepDraws d = draw_step(x, y, n, g);
  CoupledPair out;
  out.x = d.cp * embed_first(d.u * d.v, n) * d.c * x;
  out.y = d.cp * embed_first(d.u, n) * d.c * y;
  return out;
}

ReplicaCheck replica_check(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1 || a.rows() > 64) {
    throw std::invalid_argument("replica_check: square matrix up to 64 required");
  }
  const Index d = a.rows();
  ReplicaCheck out;
  out.direct = (a * a).trace();

  Matrix kron = Matrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      kron.block(i * d, j * d, d, d) = a(i, j) * a;
    }
  }
  Matrix swap = Matrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      swap(j * d + i, i * d + j) = Complex(1.0, 0.0);
    }
  }
  out.via_swap = kron.cwiseProduct(swap.transpose()).sum();
  out.difference = std::abs(out.direct - out.via_swap);
  return out;
}

TwirlEstimate twirl_decomposition(int n, int samples, std::uint64_t seed) {
  validate_qubits(n, 4, "twirl_decomposition");
  if (samples < 8) {
    throw std::invalid_argument("twirl_decomposition: samples must be >= 8");
  }
  const Index d = qubit_dim(n);
  const double dd = double(d);

  TwirlEstimate est;
  est.n = n;
  est.samples = samples;
  est.seed = seed;
  est.square_coeff_exact = 1.5 / (dd - 1.0 / dd);
  est.trace_coeff_exact = (dd * dd / 2.0 - 2.0) / (dd * dd - 1.0);

  // directions mix a traceless part with the identity so that Tr[h^2] = 1
  // while Tr[h]^2 sweeps (0, d); the two coefficients then separate as the
  // intercept and slope of a straight-line fit
  std::vector<double> xs(samples), ys(samples);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi / 2.0);
  for (int s = 0; s < samples; ++s) {
    auto g = make_engine(derive_seed(seed, std::uint64_t(s)));
    const Matrix h0 = traceless_direction(d, g);
    const double theta = angle(g);
    const Matrix h = std::cos(theta) * h0 +
                     (std::sin(theta) / std::sqrt(dd)) *
                         Matrix::Identity(d, d);
    const Matrix c = synthesize_unitary(sample_tableau(n, g));
    const Matrix w = reduce_first(c * h * c.adjoint(), n);
    xs[s] = dd * std::sin(theta) * std::sin(theta);
    ys[s] = square_of(w);
  }

  const double m = double(samples);
  double xbar = 0.0;
  double ybar = 0.0;
  for (int s = 0; s < samples; ++s) {
    xbar += xs[s];
    ybar += ys[s];
  }
  xbar /= m;
  ybar /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (int s = 0; s < samples; ++s) {
    sxx += (xs[s] - xbar) * (xs[s] - xbar);
    sxy += (xs[s] - xbar) * (ys[s] - ybar);
  }
  if (sxx < 1e-12) {
    throw SolverError("twirl_decomposition: degenerate design matrix");
  }
  const double slope = sxy / sxx;
  const double intercept = ybar - slope * xbar;
  double rss = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double r = ys[s] - intercept - slope * xs[s];
    rss += r * r;
  }
  const double sigma_sq = rss / (m - 2.0);
  est.square_coeff_hat = intercept;
  est.square_coeff_sigma =
      std::sqrt(sigma_sq * (1.0 / m + xbar * xbar / sxx));
  est.trace_coeff_hat = slope;
  est.trace_coeff_sigma = std::sqrt(sigma_sq / sxx);
  est.within_band =
      std::abs(est.square_coeff_hat - est.square_coeff_exact) <=
          3.0 * est.square_coeff_sigma + 1e-12 &&
      std::abs(est.trace_coeff_hat - est.trace_coeff_exact) <=
          3.0 * est.trace_coeff_sigma + 1e-12;
  return est;
}

CouplingTrace contraction_estimate(int n, double epsilon, int samples,
                                   std::uint64_t seed) {
  validate_qubits(n, 3, "contraction_estimate");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("contraction_estimate: epsilon must be positive");
  }
  if (samples < 8) {
    throw std::invalid_argument("contraction_estimate: samples must be >= 8");
  }
  const Index d = qubit_dim(n);
  const double dd = double(d);

  CouplingTrace trace;
  trace.n = n;
  trace.epsilon = epsilon;
  trace.samples = samples;
  trace.seed = seed;
  trace.contraction_target = 1.0 - 3.0 / (dd * dd - 1.0);
  trace.ratios.resize(samples);
  trace.subseeds.resize(samples);

  const Matrix y = Matrix::Identity(d, d);
  double sum = 0.0;
  double sum_sq = 0.0;
  double sum_id = 0.0;
  double sum_taylor = 0.0;
  for (int s = 0; s < samples; ++s) {
    const std::uint64_t sub = derive_seed(seed, std::uint64_t(s));
    trace.subseeds[s] = sub;
    auto g = make_engine(sub);
    const Matrix h = traceless_direction(d, g);
    const Matrix x = exp_i_scaled(h, epsilon);
    const StepDraws draw = draw_step(x, y, n, g);

    const Matrix cx = draw.c * x;
    const Matrix cy = draw.c * y;
    const double dist_sq = (x - y).squaredNorm();
    const Matrix xp = draw.cp * embed_first(draw.u * draw.v, n) * cx;
    const Matrix yp = draw.cp * embed_first(draw.u, n) * cy;
    const Matrix xp_id = draw.cp * embed_first(draw.u, n) * cx;

    const double ratio = (xp - yp).squaredNorm() / dist_sq;
    trace.ratios[s] = ratio;
    sum += ratio;
    sum_sq += ratio * ratio;
    sum_id += (xp_id - yp).squaredNorm() / dist_sq;

    const Matrix w = reduce_first(draw.c * h * draw.c.adjoint(), n);
    sum_taylor += 1.0 - square_of(w) / (dd / 2.0);
  }
  const double m = double(samples);
  trace.mean = sum / m;
  const double var = (sum_sq - sum * sum / m) / (m - 1.0);
  trace.stderr_of_mean = std::sqrt(std::max(var, 0.0) / m);
  trace.mean_identity_v = sum_id / m;
  trace.mean_taylor = sum_taylor / m;
  trace.advisory_more_samples = 3.0 * trace.stderr_of_mean > 0.02;

  trace.twirl = twirl_decomposition(
      n, samples, derive_seed(seed, 0xffffffff00000001ull));
  return trace;
}

WassersteinDecay wasserstein_decay(int n, int k, int t) {
  validate_qubits(n, 64, "wasserstein_decay");
  if (k < 0) {
    throw std::invalid_argument("wasserstein_decay: k must be >= 0");
  }
  if (t < 1) {
    throw std::invalid_argument("wasserstein_decay: t must be >= 1");
  }
  WassersteinDecay out;
  out.n = n;
  out.k = k;
  out.t = t;
  const double dim_sq = std::pow(4.0, double(n));
  out.rate_sq = 1.0 - 3.0 / (dim_sq - 1.0);
  out.rate = std::sqrt(out.rate_sq);
  const double scale = std::pow(2.0, double(n) / 2.0) *
                       std::pow(out.rate, double(k));
  out.distance_bound_pi = std::numbers::pi * scale;
  out.distance_bound_sqrt2 = std::numbers::sqrt2 * scale;
  out.moment_gap_bound = 2.0 * std::numbers::sqrt2 * double(t) * scale;
  return out;
}

int steps_until_below(int n, int t, double target) {
  if (!(target > 0.0)) {
    throw std::invalid_argument("steps_until_below: target must be positive");
  }
  for (int k = 0; k <= 100000000; ++k) {
    if (wasserstein_decay(n, k, t).moment_gap_bound < target) {
      return k;
    }
  }
  throw SolverError("steps_until_below: no k within the search limit");
}

}  // namespace gaplab
