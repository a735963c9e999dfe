#include "gaplab/walks.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

#include "gaplab/bounds.hpp"
#include "gaplab/rng.hpp"

namespace gaplab {

namespace {

void validate_spec(const WalkSpec& spec) {
  if (spec.n < 2 || spec.n > 16) {
    throw std::invalid_argument("walk: qubit count out of range");
  }
  if (spec.t < 1 || spec.t > 6) {
    throw std::invalid_argument("walk: moment order out of range");
  }
  const bool brick = spec.kind == WalkKind::Brickwork ||
                     spec.kind == WalkKind::CliffordBrickwork;
  if (brick && spec.n % 2 != 0) {
    throw InfeasibleError("walk: brickwork layers need an even qubit count");
  }
  if (spec.approx_layers != 0 && spec.kind != WalkKind::Sigma) {
    throw std::invalid_argument("walk: approx_layers only applies to sigma");
  }
  if (spec.approx_layers < 0) {
    throw std::invalid_argument("walk: approx_layers must be nonnegative");
  }
  if (spec.kind == WalkKind::Sigma && spec.approx_layers > 0 &&
      spec.n % 2 != 0) {
    throw InfeasibleError("walk: layered sigma sides need an even qubit count");
  }
}

// the two half-step layers of the periodic brickwork pattern
std::vector<std::pair<int, int>> brickwork_layer(int n, int parity) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = parity; a < n; a += 2) pairs.emplace_back(a, (a + 1) % n);
  return pairs;
}

LinearOperator pair_lift(const Matrix& local_basis, int n, int t, int a,
                         int b) {
  return lift_lowrank(local_basis, copy_factors(n, t, {a, b}),
                      moment_layout(n, t));
}

LinearOperator sum_op(Index dim, std::vector<LinearOperator> terms,
                      double scale) {
  auto held = std::make_shared<std::vector<LinearOperator>>(std::move(terms));
  return LinearOperator(dim, [held, scale](const Vector& x) -> Vector {
    Vector y = Vector::Zero(x.size());
    for (const auto& term : *held) y += term(x);
    return Vector(y * scale);
  });
}

// factors applied left to right: the first listed acts on the input first
LinearOperator chain_op(Index dim, std::vector<LinearOperator> factors) {
  auto held = std::make_shared<std::vector<LinearOperator>>(std::move(factors));
  return LinearOperator(dim, [held](const Vector& x) -> Vector {
    Vector y = x;
    for (const auto& factor : *held) y = factor(y);
    return y;
  });
}

LinearOperator projector_onto(const Matrix& basis) {
  auto held = std::make_shared<Matrix>(basis);
  return LinearOperator(basis.rows(), [held](const Vector& x) -> Vector {
    return (*held) * (held->adjoint() * x);
  });
}

LinearOperator complement_of(const LinearOperator& p) {
  return LinearOperator(p.dim(), [p](const Vector& x) -> Vector {
    return x - p(x);
  });
}

LinearOperator layer_op(const Matrix& local_basis, int n, int t, int parity) {
  const Index dim = moment_layout(n, t).total();
  std::vector<LinearOperator> lifts;
  for (const auto& [a, b] : brickwork_layer(n, parity)) {
    lifts.push_back(pair_lift(local_basis, n, t, a, b));
  }
  return chain_op(dim, std::move(lifts));
}

bool effectively_real(const Matrix& a) {
  return a.size() == 0 || a.imag().cwiseAbs().maxCoeff() < 1e-13;
}

// complex matrix product that drops to real arithmetic when both factors
// carry no imaginary part; the moment operators here are real-valued
Matrix dense_mul(const Matrix& a, const Matrix& b) {
  if (effectively_real(a) && effectively_real(b)) {
    const RealMatrix prod = a.real() * b.real();
    return prod.cast<Complex>();
  }
  return a * b;
}

Matrix dense_power(const Matrix& a, int k) {
  if (k < 0) throw std::invalid_argument("dense_power: negative exponent");
  if (effectively_real(a)) {
    RealMatrix acc = RealMatrix::Identity(a.rows(), a.cols());
    RealMatrix base = a.real();
    int e = k;
    while (e > 0) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc.cast<Complex>();
  }
  Matrix acc = Matrix::Identity(a.rows(), a.cols());
  Matrix base = a;
  int e = k;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

// spectral norm; avoids the SVD above moderate sizes via the Gram matrix
double dense_op_norm(const Matrix& a) {
  if (a.rows() <= 512) return schatten_norm(a, Schatten::Inf);
  const double imag_size =
      a.size() == 0 ? 0.0 : a.imag().cwiseAbs().maxCoeff();
  if (imag_size < 1e-13) {
    const RealMatrix ar = a.real();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(ar.transpose() * ar,
                                                 Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
      throw SolverError("dense_op_norm: eigensolver failed");
    }
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }
  const RealVector eigs = hermitian_eigenvalues(a.adjoint() * a, 1e-6);
  return std::sqrt(std::max(0.0, eigs.maxCoeff()));
}

Matrix local_unitary_basis(WalkKind kind, int t) {
  if (kind == WalkKind::CliffordBrickwork) return clifford_projector(2, t).basis;
  return haar_projector(4, t).basis;
}

// moment operator of one layered group walk step (both brickwork kinds)
LinearOperator brickwork_op(const WalkSpec& spec) {
  const Matrix local = local_unitary_basis(spec.kind, spec.t);
  const Index dim = moment_layout(spec.n, spec.t).total();
  return chain_op(dim, {layer_op(local, spec.n, spec.t, 0),
                        layer_op(local, spec.n, spec.t, 1)});
}

// adjoint of the layered step: the layers compose in the other order
LinearOperator brickwork_op_adjoint(const WalkSpec& spec) {
  const Matrix local = local_unitary_basis(spec.kind, spec.t);
  const Index dim = moment_layout(spec.n, spec.t).total();
  return chain_op(dim, {layer_op(local, spec.n, spec.t, 1),
                        layer_op(local, spec.n, spec.t, 0)});
}

LinearOperator single_qubit_haar_lift(int n, int t) {
  return lift_lowrank(haar_projector(2, t).basis, copy_factors(n, t, {0}),
                      moment_layout(n, t));
}

bool group_projector_feasible(int n, int t);
double subspace_containment_residual(const Matrix& inner, const Matrix& outer);

// orthonormal basis of the group commutant the sigma walk projects onto;
// falls back to the fixed space of the averaged pair walk when the group is
// too large to enumerate, since two-qubit group gates on a ring generate the
// whole group
Matrix sigma_group_basis(int n, int t) {
  if (group_projector_feasible(n, t)) {
    return clifford_projector(n, t).basis;
  }
  const Index dim = moment_layout(n, t).total();
  if (dim > (Index(1) << 19)) {
    throw InfeasibleError(
        "sigma_group_basis: commutant extraction infeasible at this size");
  }
  const HaarProjector haar = haar_projector(Index(1) << n, t);
  const Matrix local = clifford_projector(2, t).basis;
  std::vector<LinearOperator> lifts;
  for (int i = 0; i < n; ++i) {
    lifts.push_back(pair_lift(local, n, t, i, (i + 1) % n));
  }
  const LinearOperator avg = sum_op(dim, std::move(lifts), 1.0 / n);
  EigOptions opts;
  opts.force_iterative = true;
  const FixedSpaceReport fs =
      fixed_space(avg, static_cast<int>(haar.rank) + 16, opts);
  const double res = subspace_containment_residual(haar.basis, fs.basis);
  if (res > 1e-6) {
    throw SolverError(
        "sigma_group_basis: fixed space misses the haar commutant, residual " +
        std::to_string(res));
  }
  return fs.basis;
}

LinearOperator sigma_op(const WalkSpec& spec, bool adjoint) {
  const Index dim = moment_layout(spec.n, spec.t).total();
  const LinearOperator l1 = single_qubit_haar_lift(spec.n, spec.t);
  if (spec.approx_layers == 0) {
    const LinearOperator pc =
        projector_onto(sigma_group_basis(spec.n, spec.t));
    return chain_op(dim, {pc, l1, pc});
  }
  WalkSpec side = spec;
  side.kind = WalkKind::CliffordBrickwork;
  side.approx_layers = 0;
  const LinearOperator step =
      adjoint ? brickwork_op_adjoint(side) : brickwork_op(side);
  std::vector<LinearOperator> factors;
  for (int r = 0; r < spec.approx_layers; ++r) factors.push_back(step);
  factors.push_back(l1);
  for (int r = 0; r < spec.approx_layers; ++r) factors.push_back(step);
  return chain_op(dim, std::move(factors));
}

LinearOperator moment_operator_adjoint(const WalkSpec& spec) {
  switch (spec.kind) {
    case WalkKind::Local:
      return moment_operator(spec);
    case WalkKind::Brickwork:
    case WalkKind::CliffordBrickwork:
      return brickwork_op_adjoint(spec);
    case WalkKind::Sigma:
      return sigma_op(spec, true);
  }
  throw std::logic_error("moment_operator_adjoint: unknown kind");
}

bool kind_is_hermitian(const WalkSpec& spec) {
  return spec.kind == WalkKind::Local ||
         (spec.kind == WalkKind::Sigma && spec.approx_layers == 0);
}

bool group_projector_feasible(int n, int t) {
  if (n > 3) return false;
  Index tuples = 1;
  for (int c = 1; c < t; ++c) {
    tuples *= Index(1) << (2 * n);
    if (tuples > (Index(1) << 13)) return false;
  }
  // full enumeration over the symplectic group; past 720 elements the kernel
  // pass multiplies the tuple count, so keep the product moderate
  if (n == 3 && t > 2) return false;
  return true;
}

double subspace_containment_residual(const Matrix& inner, const Matrix& outer) {
  const Matrix diff = inner - outer * (outer.adjoint() * inner);
  return diff.norm();
}

constexpr double kCheckTol = 1e-9;

}  // namespace

std::string walk_kind_name(WalkKind kind) {
  switch (kind) {
    case WalkKind::Local:
      return "local";
    case WalkKind::Brickwork:
      return "brickwork";
    case WalkKind::CliffordBrickwork:
      return "clifford-brickwork";
    case WalkKind::Sigma:
      return "sigma";
  }
  throw std::logic_error("walk_kind_name: unknown kind");
}

WalkKind walk_kind_from_name(const std::string& name) {
  if (name == "local") return WalkKind::Local;
  if (name == "brickwork") return WalkKind::Brickwork;
  if (name == "clifford-brickwork") return WalkKind::CliffordBrickwork;
  if (name == "sigma") return WalkKind::Sigma;
  throw std::invalid_argument("walk_kind_from_name: unknown kind " + name);
}

FactorLayout moment_layout(int n, int t) {
  FactorLayout layout;
  layout.dims.assign(static_cast<size_t>(2 * t) * n, Index(2));
  return layout;
}

std::vector<int> copy_factors(int n, int t, const std::vector<int>& qubits) {
  std::vector<int> factors;
  factors.reserve(static_cast<size_t>(2 * t) * qubits.size());
  for (int c = 0; c < 2 * t; ++c) {
    for (int q : qubits) {
      if (q < 0 || q >= n) {
        throw std::invalid_argument("copy_factors: qubit index out of range");
      }
      factors.push_back(c * n + q);
    }
  }
  return factors;
}

Matrix reference_basis(const WalkSpec& spec) {
  validate_spec(spec);
  if (spec.kind != WalkKind::CliffordBrickwork) {
    return haar_projector(Index(1) << spec.n, spec.t).basis;
  }
  if (group_projector_feasible(spec.n, spec.t)) {
    return clifford_projector(spec.n, spec.t).basis;
  }
  // the fixed space of one layered step is the group commutant; extract it
  // iteratively and require that it contains the full-unitary commutant
  const Matrix haar = haar_projector(Index(1) << spec.n, spec.t).basis;
  const LinearOperator step = brickwork_op(spec);
  const LinearOperator sandwich = chain_op(
      step.dim(), {layer_op(local_unitary_basis(spec.kind, spec.t), spec.n,
                            spec.t, 0),
                   layer_op(local_unitary_basis(spec.kind, spec.t), spec.n,
                            spec.t, 1),
                   layer_op(local_unitary_basis(spec.kind, spec.t), spec.n,
                            spec.t, 0)});
  EigOptions opts;
  opts.force_iterative = true;
  const FixedSpaceReport fs =
      fixed_space(sandwich, static_cast<int>(haar.cols()) + 8, opts);
  const double res = subspace_containment_residual(haar, fs.basis);
  if (res > 1e-6) {
    throw SolverError("reference_basis: fixed space misses the haar commutant, residual " +
                      std::to_string(res));
  }
  return fs.basis;
}

LinearOperator moment_operator(const WalkSpec& spec) {
  validate_spec(spec);
  const Index dim = moment_layout(spec.n, spec.t).total();
  switch (spec.kind) {
    case WalkKind::Local: {
      const Matrix local = haar_projector(4, spec.t).basis;
      std::vector<LinearOperator> lifts;
      for (int i = 0; i < spec.n; ++i) {
        lifts.push_back(pair_lift(local, spec.n, spec.t, i, (i + 1) % spec.n));
      }
      return sum_op(dim, std::move(lifts), 1.0 / spec.n);
    }
    case WalkKind::Brickwork:
    case WalkKind::CliffordBrickwork:
      return brickwork_op(spec);
    case WalkKind::Sigma:
      return sigma_op(spec, false);
  }
  throw std::logic_error("moment_operator: unknown kind");
}

Matrix moment_operator_dense(const WalkSpec& spec, Index cap) {
  return moment_operator(spec).to_dense(cap);
}

LinearOperator hamiltonian(int n, int t) {
  WalkSpec spec;
  spec.kind = WalkKind::Local;
  spec.n = n;
  spec.t = t;
  validate_spec(spec);
  const Index dim = moment_layout(n, t).total();
  const Matrix local = haar_projector(4, t).basis;
  std::vector<LinearOperator> lifts;
  for (int i = 0; i < n; ++i) {
    lifts.push_back(pair_lift(local, n, t, i, (i + 1) % n));
  }
  auto held = std::make_shared<std::vector<LinearOperator>>(std::move(lifts));
  const double count = n;
  return LinearOperator(dim, [held, count](const Vector& x) -> Vector {
    Vector y = count * x;
    for (const auto& term : *held) y -= term(x);
    return y;
  });
}

Matrix hamiltonian_dense(int n, int t, Index cap) {
  return hamiltonian(n, t).to_dense(cap);
}

GapReport spectral_gap(const WalkSpec& spec, const EigOptions& opts) {
  validate_spec(spec);
  GapReport rep;
  rep.walk = spec;
  const Index dim = moment_layout(spec.n, spec.t).total();
  const Index dense_cap = std::min<Index>(opts.dense_cap, Index(1) << 12);
  const bool dense_route = dim <= dense_cap && !opts.force_iterative;

  EigOptions sub = opts;
  sub.force_iterative = true;

  switch (spec.kind) {
    case WalkKind::Local: {
      const Matrix haar = haar_projector(Index(1) << spec.n, spec.t).basis;
      rep.fixed_space_rank = haar.cols();
      rep.bound_value = gap_bounds(spec.n, spec.t).unconditional_g;
      if (dense_route) {
        const Matrix m = moment_operator_dense(spec, dense_cap);
        const Matrix diff = m - Matrix(haar * haar.adjoint());
        const RealVector eigs = hermitian_eigenvalues(diff);
        rep.g_value = std::max(eigs.maxCoeff(), 0.0);
        const Matrix h = hamiltonian_dense(spec.n, spec.t, dense_cap);
        rep.delta_value =
            smallest_nonzero_dense(h, static_cast<int>(haar.cols()));
        rep.method = "dense";
      } else {
        const LinearOperator m = moment_operator(spec);
        const LinearOperator diff =
            m - projector_onto(haar);
        const ExtremalReport top = largest_eigenvalue(diff, sub);
        rep.g_value = std::max(top.value, 0.0);
        const LinearOperator scaled = m.scaled(Complex(spec.n, 0.0));
        const ExtremalReport second = largest_eigenvalue(scaled, haar, sub);
        rep.delta_value = spec.n - second.value;
        rep.method = "krylov";
        rep.residual = std::max(top.residual, second.residual);
      }
      rep.identity_gap =
          std::abs(rep.g_value - (1.0 - rep.delta_value / spec.n));
      break;
    }
    case WalkKind::Brickwork: {
      const Matrix haar = haar_projector(Index(1) << spec.n, spec.t).basis;
      rep.fixed_space_rank = haar.cols();
      const Matrix local = haar_projector(4, spec.t).basis;
      if (dense_route) {
        const Matrix m = moment_operator_dense(spec, dense_cap);
        rep.g_value = dense_op_norm(m - Matrix(haar * haar.adjoint()));
        const Matrix h = hamiltonian_dense(spec.n, spec.t, dense_cap);
        rep.delta_value =
            smallest_nonzero_dense(h, static_cast<int>(haar.cols()));
        rep.method = "dense";
      } else {
        const LinearOperator sandwich =
            chain_op(dim, {layer_op(local, spec.n, spec.t, 0),
                           layer_op(local, spec.n, spec.t, 1),
                           layer_op(local, spec.n, spec.t, 0)}) -
            projector_onto(haar);
        const ExtremalReport top = largest_eigenvalue(sandwich, sub);
        rep.g_value = std::sqrt(std::max(top.value, 0.0));
        const LinearOperator scaled =
            (LinearOperator::identity(dim).scaled(Complex(spec.n, 0.0)) -
             hamiltonian(spec.n, spec.t));
        const ExtremalReport second = largest_eigenvalue(scaled, haar, sub);
        rep.delta_value = spec.n - second.value;
        rep.method = "krylov";
        rep.residual = std::max(top.residual, second.residual);
      }
      rep.bound_value = brickwork_conversion_bound(rep.delta_value);
      break;
    }
    case WalkKind::CliffordBrickwork: {
      const Matrix group = reference_basis(spec);
      rep.fixed_space_rank = group.cols();
      rep.bound_value = clifford_walk_gap_bound(spec.n);
      if (dense_route) {
        const Matrix m = moment_operator_dense(spec, dense_cap);
        rep.g_value = dense_op_norm(m - Matrix(group * group.adjoint()));
        rep.method = "dense";
      } else {
        const Matrix local = local_unitary_basis(spec.kind, spec.t);
        const LinearOperator sandwich =
            chain_op(dim, {layer_op(local, spec.n, spec.t, 0),
                           layer_op(local, spec.n, spec.t, 1),
                           layer_op(local, spec.n, spec.t, 0)}) -
            projector_onto(group);
        const ExtremalReport top = largest_eigenvalue(sandwich, sub);
        rep.g_value = std::sqrt(std::max(top.value, 0.0));
        rep.method = "krylov";
        rep.residual = top.residual;
      }
      rep.delta_value = 1.0 - rep.g_value;
      break;
    }
    case WalkKind::Sigma: {
      const HaarProjector haar = haar_projector(Index(1) << spec.n, spec.t);
      rep.fixed_space_rank = haar.rank;
      rep.bound_value = sigma_gap_bound(spec.n);
      if (spec.approx_layers > 0) {
        const Matrix m = moment_operator_dense(spec, dense_cap);
        rep.g_value = dense_op_norm(m - Matrix(haar.basis * haar.basis.adjoint()));
        rep.method = "dense";
        rep.delta_value = 1.0 - rep.g_value;
        break;
      }
      const Matrix group = sigma_group_basis(spec.n, spec.t);
      const double nesting = subspace_containment_residual(haar.basis, group);
      if (nesting > 1e-8) {
        throw SolverError("spectral_gap: haar commutant not inside the group commutant, residual " +
                          std::to_string(nesting));
      }
      rep.residual = nesting;
      const Index extra = group.cols() - haar.rank;
      if (extra == 0) {
        rep.g_value = 0.0;
      } else {
        // orthonormal basis of the group commutant minus the haar commutant;
        // compressing the single-qubit projector there gives the whole
        // nontrivial spectrum
        Matrix complement =
            group - haar.basis * (haar.basis.adjoint() * group);
        Eigen::ColPivHouseholderQR<Matrix> qr(complement);
        Matrix w = qr.householderQ() * Matrix::Identity(dim, extra);
        const LinearOperator l1 = single_qubit_haar_lift(spec.n, spec.t);
        Matrix compressed(extra, extra);
        Matrix applied(dim, extra);
        for (Index j = 0; j < extra; ++j) applied.col(j) = l1(w.col(j));
        compressed = w.adjoint() * applied;
        const RealVector eigs = hermitian_eigenvalues(compressed);
        rep.g_value = std::max(0.0, eigs.maxCoeff());
        if (eigs.minCoeff() < -1e-10) {
          throw SolverError("spectral_gap: compressed block not positive");
        }
      }
      rep.method = "compression";
      rep.delta_value = 1.0 - rep.g_value;
      break;
    }
  }
  rep.satisfied = rep.g_value <= rep.bound_value + kCheckTol;
  return rep;
}

ConvolutionReport convolution_gap_check(const WalkSpec& spec, int k,
                                        const EigOptions& opts) {
  validate_spec(spec);
  if (k < 1) throw std::invalid_argument("convolution_gap_check: k must be positive");
  ConvolutionReport rep;
  rep.walk = spec;
  rep.k = k;
  const GapReport gap = spectral_gap(spec, opts);
  rep.g_value = gap.g_value;
  rep.g_power = std::pow(gap.g_value, k);

  const Index dim = moment_layout(spec.n, spec.t).total();
  const Index dense_cap = std::min<Index>(opts.dense_cap, Index(1) << 12);
  const Matrix reference = reference_basis(spec);
  if (dim <= dense_cap && !opts.force_iterative) {
    const Matrix m = moment_operator_dense(spec, dense_cap);
    const Matrix mk = dense_power(m, k);
    rep.norm_value =
        dense_op_norm(mk - Matrix(reference * reference.adjoint()));
  } else if (kind_is_hermitian(spec)) {
    const LinearOperator m = moment_operator(spec);
    const LinearOperator p = projector_onto(reference);
    std::vector<LinearOperator> factors(static_cast<size_t>(k), m);
    const LinearOperator mk = chain_op(dim, std::move(factors));
    EigOptions sub = opts;
    sub.force_iterative = true;
    const ExtremalReport top = largest_eigenvalue(mk - p, sub);
    rep.norm_value = std::max(top.value, 0.0);
  } else {
    const LinearOperator m = moment_operator(spec);
    const LinearOperator ma = moment_operator_adjoint(spec);
    const LinearOperator p = projector_onto(reference);
    std::vector<LinearOperator> factors;
    factors.push_back(complement_of(p));
    for (int r = 0; r < k; ++r) factors.push_back(m);
    for (int r = 0; r < k; ++r) factors.push_back(ma);
    factors.push_back(complement_of(p));
    const LinearOperator gram = chain_op(dim, std::move(factors));
    EigOptions sub = opts;
    sub.force_iterative = true;
    const ExtremalReport top = largest_eigenvalue(gram, sub);
    rep.norm_value = std::sqrt(std::max(top.value, 0.0));
  }
  rep.within_power_bound = rep.norm_value <= rep.g_power + kCheckTol;
  rep.equality_gap = std::abs(rep.norm_value - rep.g_power);
  return rep;
}

DesignReport design_check(const WalkSpec& spec, int k, double epsilon,
                          DesignMode mode) {
  validate_spec(spec);
  if (k < 1) throw std::invalid_argument("design_check: k must be positive");
  if (epsilon <= 0.0) {
    throw std::invalid_argument("design_check: epsilon must be positive");
  }
  DesignReport rep;
  rep.walk = spec;
  rep.k = k;
  rep.epsilon = epsilon;
  rep.mode = mode;
  const GapReport gap = spectral_gap(spec);
  rep.g_value = gap.g_value;
  const double dt = std::pow(double(Index(1) << spec.n), spec.t);
  rep.additive_value = dt * std::pow(rep.g_value, k);
  rep.additive_ok = rep.additive_value <= epsilon;
  rep.sufficient_condition =
      std::pow(rep.g_value, k) <= epsilon / (dt * dt);

  if (mode == DesignMode::RelativePsd) {
    const Index dim = moment_layout(spec.n, spec.t).total();
    rep.relative_feasible = dim <= (Index(1) << 12);
    if (rep.relative_feasible) {
      const Matrix m = moment_operator_dense(spec, dim);
      const Matrix mk = dense_power(m, k);
      const Matrix reference = reference_basis(spec);
      const Matrix p = reference * reference.adjoint();
      const PsdReport upper =
          psd_check(choi_from_superop((1.0 + epsilon) * mk - p), 1e-8);
      const PsdReport lower =
          psd_check(choi_from_superop(p - (1.0 - epsilon) * mk), 1e-8);
      rep.upper_branch_min_eig = upper.min_eigenvalue;
      rep.lower_branch_min_eig = lower.min_eigenvalue;
      rep.relative_ok = upper.psd && lower.psd;
    }
  }
  return rep;
}

DesignReport design_check_point_mass(int n, int t, double epsilon) {
  WalkSpec spec;
  spec.kind = WalkKind::Local;
  spec.n = n;
  spec.t = t;
  validate_spec(spec);
  if (epsilon <= 0.0) {
    throw std::invalid_argument("design_check_point_mass: epsilon must be positive");
  }
  DesignReport rep;
  rep.walk = spec;
  rep.k = 0;
  rep.epsilon = epsilon;
  rep.mode = DesignMode::RelativePsd;
  const Index dim = moment_layout(n, t).total();
  if (dim > (Index(1) << 12)) {
    throw InfeasibleError("design_check_point_mass: moment space too large");
  }
  const Matrix haar = haar_projector(Index(1) << n, t).basis;
  const Matrix p = haar * haar.adjoint();
  const Matrix mk = Matrix::Identity(dim, dim);
  rep.g_value = dense_op_norm(mk - p);
  const double dt = std::pow(double(Index(1) << n), t);
  rep.additive_value = dt * rep.g_value;
  rep.additive_ok = rep.additive_value <= epsilon;
  rep.sufficient_condition = rep.g_value <= epsilon / (dt * dt);
  rep.relative_feasible = true;
  const PsdReport upper =
      psd_check(choi_from_superop((1.0 + epsilon) * mk - p), 1e-8);
  const PsdReport lower =
      psd_check(choi_from_superop(p - (1.0 - epsilon) * mk), 1e-8);
  rep.upper_branch_min_eig = upper.min_eigenvalue;
  rep.lower_branch_min_eig = lower.min_eigenvalue;
  rep.relative_ok = upper.psd && lower.psd;
  return rep;
}

ProjectorFamily chain_family(int n, int t, const std::vector<int>& order) {
  WalkSpec probe;
  probe.n = n;
  probe.t = t;
  validate_spec(probe);
  std::vector<int> sites = order;
  if (sites.empty()) {
    sites.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) sites[static_cast<size_t>(i)] = i;
  }
  ProjectorFamily fam;
  fam.dim = moment_layout(n, t).total();
  fam.label = "chain n=" + std::to_string(n) + " t=" + std::to_string(t);
  const Matrix local = haar_projector(4, t).basis;
  for (int i : sites) {
    if (i < 0 || i >= n) {
      throw std::invalid_argument("chain_family: site out of range");
    }
    fam.projectors.push_back(
        complement_of(pair_lift(local, n, t, i, (i + 1) % n)));
  }
  fam.ground_basis = haar_projector(Index(1) << n, t).basis;
  return fam;
}

DetectabilityReport detectability_check(const ProjectorFamily& family,
                                        const EigOptions& opts) {
  const int m = static_cast<int>(family.projectors.size());
  if (m == 0 || family.ground_basis.cols() == 0) {
    throw std::invalid_argument("detectability_check: empty family");
  }
  DetectabilityReport rep;
  rep.label = family.label;

  // the declared ground basis must be annihilated by every penalty
  double ground_res = 0.0;
  for (const auto& q : family.projectors) {
    for (Index j = 0; j < family.ground_basis.cols(); ++j) {
      ground_res = std::max(ground_res, q(family.ground_basis.col(j)).norm());
    }
  }
  if (ground_res > 1e-7) {
    throw SolverError("detectability_check: ground basis not annihilated, residual " +
                      std::to_string(ground_res));
  }

  EigOptions sub = opts;
  sub.force_iterative = true;

  auto held = std::make_shared<std::vector<LinearOperator>>(family.projectors);
  const double shift = m;
  const LinearOperator shifted(
      family.dim, [held, shift](const Vector& x) -> Vector {
        Vector y = shift * x;
        for (const auto& q : *held) y -= q(x);
        return y;
      });
  const ExtremalReport second =
      largest_eigenvalue(shifted, family.ground_basis, sub);
  rep.delta_value = shift - second.value;
  rep.residual = second.residual;

  // norm of (1 - Q_last) ... (1 - Q_first) restricted off the ground space,
  // via the top eigenvalue of the gram operator of that product
  auto ground = std::make_shared<Matrix>(family.ground_basis);
  const LinearOperator gram(
      family.dim, [held, ground](const Vector& x) -> Vector {
        Vector y = x - (*ground) * (ground->adjoint() * x);
        for (const auto& q : *held) y -= q(y);
        for (auto it = held->rbegin(); it != held->rend(); ++it) {
          y -= (*it)(y);
        }
        y -= (*ground) * (ground->adjoint() * y);
        return y;
      });
  const ExtremalReport top = largest_eigenvalue(gram, sub);
  rep.product_norm = std::sqrt(std::max(top.value, 0.0));
  rep.residual = std::max(rep.residual, top.residual);

  // commutation degree: the largest number of other penalties any single
  // penalty fails to commute with
  EigOptions rough = sub;
  rough.tol = 1e-4;
  rough.max_matvecs = 4000;
  std::vector<int> degree(static_cast<size_t>(m), 0);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const LinearOperator& qi = family.projectors[static_cast<size_t>(i)];
      const LinearOperator& qj = family.projectors[static_cast<size_t>(j)];
      const LinearOperator comm_gram(
          family.dim, [&qi, &qj](const Vector& x) -> Vector {
            const Vector c = qi(qj(x)) - qj(qi(x));
            return qj(qi(c)) - qi(qj(c));
          });
      const ExtremalReport cg = largest_eigenvalue(comm_gram, rough);
      if (std::sqrt(std::max(cg.value, 0.0)) > 1e-6) {
        degree[static_cast<size_t>(i)] += 1;
        degree[static_cast<size_t>(j)] += 1;
      }
    }
  }
  rep.commutation_degree = *std::max_element(degree.begin(), degree.end());

  const double d2 = double(rep.commutation_degree) * rep.commutation_degree;
  rep.upper_bound =
      rep.commutation_degree == 0
          ? 0.0
          : std::sqrt(1.0 / (rep.delta_value / d2 + 1.0));
  rep.lower_applicable = 4.0 * rep.delta_value <= 1.0;
  rep.lower_bound = rep.lower_applicable
                        ? std::sqrt(1.0 - 4.0 * rep.delta_value)
                        : 0.0;
  const double slack = 1e-7 + 10.0 * rep.residual;
  rep.sandwich_ok = rep.product_norm <= rep.upper_bound + slack &&
                    (!rep.lower_applicable ||
                     rep.product_norm >= rep.lower_bound - slack);
  return rep;
}

HtildeModel htilde(int n, int t, int k, const std::vector<int>& order) {
  WalkSpec probe;
  probe.n = n;
  probe.t = t;
  validate_spec(probe);
  if (k < 1) throw std::invalid_argument("htilde: k must be positive");
  HtildeModel model;
  model.n = n;
  model.t = t;
  model.k = k;
  const Index dim = moment_layout(n, t).total();

  const Matrix group_local = clifford_projector(2, t).basis;
  std::vector<LinearOperator> pair_lifts;
  for (int i = 0; i < n; ++i) {
    pair_lifts.push_back(pair_lift(group_local, n, t, i, (i + 1) % n));
  }
  const LinearOperator l1 = single_qubit_haar_lift(n, t);

  auto held = std::make_shared<std::vector<LinearOperator>>(pair_lifts);
  auto l1_held = std::make_shared<LinearOperator>(l1);
  const double weight = 2.0 * k;
  const double total = weight * n + 1.0;
  model.op = LinearOperator(
      dim, [held, l1_held, weight, total](const Vector& x) -> Vector {
        Vector y = total * x;
        for (const auto& lift : *held) y -= weight * lift(x);
        y -= (*l1_held)(x);
        return y;
      });

  // penalty family in the order the walk multiplies its factors; one layer
  // sweep per step on each side of the middle single-qubit projector
  std::vector<int> sweep = order;
  if (sweep.empty()) {
    if (n % 2 == 0) {
      for (int parity : {0, 1}) {
        for (const auto& [a, b] : brickwork_layer(n, parity)) {
          sweep.push_back(a);
          (void)b;
        }
      }
    } else {
      for (int i = 0; i < n; ++i) sweep.push_back(i);
    }
  }
  model.family.dim = dim;
  model.family.label = "htilde n=" + std::to_string(n) +
                       " t=" + std::to_string(t) + " k=" + std::to_string(k);
  auto push_sweep = [&]() {
    for (int rep = 0; rep < k; ++rep) {
      for (int i : sweep) {
        if (i < 0 || i >= n) {
          throw std::invalid_argument("htilde: site out of range");
        }
        model.family.projectors.push_back(
            complement_of(pair_lifts[static_cast<size_t>(i)]));
      }
    }
  };
  push_sweep();
  model.family.projectors.push_back(complement_of(l1));
  push_sweep();
  model.family.ground_basis = haar_projector(Index(1) << n, t).basis;
  model.ground_basis = model.family.ground_basis;
  return model;
}

Matrix htilde_dense(const HtildeModel& model, Index cap) {
  return model.op.to_dense(cap);
}

ChainReport theorem_chain_check(int n, int t, int k) {
  WalkSpec bw;
  bw.kind = WalkKind::CliffordBrickwork;
  bw.n = n;
  bw.t = t;
  validate_spec(bw);
  if (k < 1) {
    throw std::invalid_argument("theorem_chain_check: k must be positive");
  }
  const Index dim = moment_layout(n, t).total();
  if (dim > (Index(1) << 12)) {
    throw InfeasibleError("theorem_chain_check: moment space too large for the dense route");
  }
  ChainReport rep;
  rep.n = n;
  rep.t = t;
  rep.k = k;

  const double card = std::pow(2.0, 2 * n) - 1.0;

  const Matrix m_bw = moment_operator_dense(bw, dim);
  const CliffordProjector group = clifford_projector(n, t);
  const Matrix p_cl = group.basis * group.basis.adjoint();
  const HaarProjector haar = haar_projector(Index(1) << n, t);
  const Matrix p_h = haar.basis * haar.basis.adjoint();
  const Matrix l1 = single_qubit_haar_lift(n, t).to_dense(dim);

  rep.group_walk_gap = dense_op_norm(m_bw - p_cl);
  const Matrix mk = dense_power(m_bw, k);
  rep.approx_error_k = dense_op_norm(mk - p_cl);
  const Matrix aux = dense_mul(dense_mul(mk, l1), mk);
  rep.aux_norm = dense_op_norm(aux - p_h);
  rep.sigma_norm = dense_op_norm(dense_mul(dense_mul(p_cl, l1), p_cl) - p_h);

  const HtildeModel model = htilde(n, t, k);
  const Matrix ht = htilde_dense(model, dim);
  const Matrix h_chain = hamiltonian_dense(n, t, dim);
  const double kernel_tol = 1e-7 * (2.0 * k + 1.0);

  const RealVector ht_eigs = hermitian_eigenvalues(ht);
  Index ground_ht = 0;
  while (ground_ht < ht_eigs.size() && ht_eigs(ground_ht) < kernel_tol) {
    ++ground_ht;
  }
  if (ground_ht == ht_eigs.size()) {
    throw SolverError("theorem_chain_check: surrogate has no spectral gap to read");
  }
  rep.ground_dim_htilde = ground_ht;
  rep.delta_htilde = ht_eigs(ground_ht);

  const RealVector h_eigs = hermitian_eigenvalues(h_chain);
  Index ground_h = 0;
  while (ground_h < h_eigs.size() && h_eigs(ground_h) < 1e-8) ++ground_h;
  if (ground_h == h_eigs.size()) {
    throw SolverError("theorem_chain_check: chain has no spectral gap to read");
  }
  rep.ground_dim_chain = ground_h;
  rep.delta_chain = h_eigs(ground_h);

  const Matrix dominance = (2.0 * k + 1.0) * h_chain - ht;
  const RealVector dom_eigs = hermitian_eigenvalues(dominance);
  rep.chain_psd_min_eig = dom_eigs.minCoeff();

  auto add_link = [&rep](const std::string& name, double lhs, double rhs,
                         bool ok) {
    rep.links.push_back(ChainLink{name, lhs, rhs, ok});
  };
  const double walk_bound = clifford_walk_gap_bound(n);
  add_link("group walk gap bound", rep.group_walk_gap, walk_bound,
           rep.group_walk_gap <= walk_bound + kCheckTol);
  const double power = std::pow(rep.group_walk_gap, k);
  add_link("power decay", rep.approx_error_k, power,
           rep.approx_error_k <= power + kCheckTol);
  const double tails = rep.sigma_norm + 2.0 * rep.approx_error_k;
  add_link("sigma plus tails", rep.aux_norm, tails,
           rep.aux_norm <= tails + kCheckTol);
  const double sigma_bound = sigma_gap_bound(n);
  add_link("sigma step bound", rep.sigma_norm, sigma_bound,
           rep.sigma_norm <= sigma_bound + kCheckTol);
  const double combined = 1.0 - 0.5 / card;
  add_link("combined step bound", rep.aux_norm, combined,
           rep.aux_norm <= combined + kCheckTol);
  const double overlap_floor =
      rep.delta_htilde < 0.25
          ? std::sqrt(1.0 - 4.0 * rep.delta_htilde)
          : 0.0;
  add_link("overlap floor", overlap_floor, rep.aux_norm,
           overlap_floor <= rep.aux_norm + kCheckTol);
  const double step_floor = 0.125 / card;
  add_link("surrogate gap floor", rep.delta_htilde, step_floor,
           rep.delta_htilde >= step_floor - kCheckTol);
  add_link("penalty dominance", rep.chain_psd_min_eig, 0.0,
           rep.chain_psd_min_eig >= -1e-8);
  add_link("shared ground space", double(rep.ground_dim_htilde),
           double(rep.ground_dim_chain),
           rep.ground_dim_htilde == rep.ground_dim_chain &&
               rep.ground_dim_chain == haar.rank);
  const double transfer = rep.delta_htilde / (2.0 * k + 1.0);
  add_link("gap transfer", rep.delta_chain, transfer,
           rep.delta_chain >= transfer - kCheckTol);
  const double final_floor = 1.0 / (8.0 * (2.0 * k + 1.0) * card);
  add_link("final gap floor", rep.delta_chain, final_floor,
           rep.delta_chain >= final_floor - kCheckTol);

  rep.all_ok = true;
  for (const auto& link : rep.links) rep.all_ok = rep.all_ok && link.ok;
  return rep;
}

namespace {

Matrix embed_two_qubit(const Matrix& u, int n, int a, int b) {
  const Index d = Index(1) << n;
  Matrix out = Matrix::Zero(d, d);
  const Index bit_a = Index(1) << (n - 1 - a);
  const Index bit_b = Index(1) << (n - 1 - b);
  for (Index col = 0; col < d; ++col) {
    const int ca = (col & bit_a) ? 1 : 0;
    const int cb = (col & bit_b) ? 1 : 0;
    const int lc = 2 * ca + cb;
    const Index base = col & ~(bit_a | bit_b);
    for (int lr = 0; lr < 4; ++lr) {
      const Index row =
          base | ((lr & 2) ? bit_a : 0) | ((lr & 1) ? bit_b : 0);
      out(row, col) = u(lr, lc);
    }
  }
  return out;
}

Matrix embed_single_qubit(const Matrix& u, int n, int a) {
  const Index d = Index(1) << n;
  Matrix out = Matrix::Zero(d, d);
  const Index bit = Index(1) << (n - 1 - a);
  for (Index col = 0; col < d; ++col) {
    const int c = (col & bit) ? 1 : 0;
    const Index base = col & ~bit;
    for (int r = 0; r < 2; ++r) {
      out(base | (r ? bit : 0), col) = u(r, c);
    }
  }
  return out;
}

}  // namespace

Matrix sample_walk_unitary(const WalkSpec& spec, int k, std::mt19937_64& g) {
  validate_spec(spec);
  if (k < 0) throw std::invalid_argument("sample_walk_unitary: negative step count");
  const Index d = Index(1) << spec.n;
  Matrix u = Matrix::Identity(d, d);
  switch (spec.kind) {
    case WalkKind::Local: {
      for (int step = 0; step < k; ++step) {
        const int i = static_cast<int>(uniform_index(g, spec.n));
        const Matrix gate = sample_haar(4, g());
        u = embed_two_qubit(gate, spec.n, i, (i + 1) % spec.n) * u;
      }
      break;
    }
    case WalkKind::Brickwork:
    case WalkKind::CliffordBrickwork: {
      for (int step = 0; step < k; ++step) {
        for (int parity : {0, 1}) {
          for (const auto& [a, b] : brickwork_layer(spec.n, parity)) {
            const Matrix gate =
                spec.kind == WalkKind::Brickwork
                    ? sample_haar(4, g())
                    : synthesize_unitary(sample_tableau(2, g));
            u = embed_two_qubit(gate, spec.n, a, b) * u;
          }
        }
      }
      break;
    }
    case WalkKind::Sigma: {
      if (spec.n > 4) {
        throw InfeasibleError("sample_walk_unitary: sigma sampling needs synthesized group elements");
      }
      for (int step = 0; step < k; ++step) {
        const Matrix inner = synthesize_unitary(sample_tableau(spec.n, g));
        const Matrix gate = embed_single_qubit(sample_haar(2, g()), spec.n, 0);
        const Matrix outer = synthesize_unitary(sample_tableau(spec.n, g));
        u = outer * gate * inner * u;
      }
      break;
    }
  }
  return u;
}

namespace {

McEstimateW estimate_from_samples(const std::vector<double>& values) {
  McEstimateW est;
  est.samples = static_cast<int>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= values.size();
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var = values.size() > 1 ? var / (double(values.size()) - 1.0) : 0.0;
  est.mean = mean;
  est.stderr_of_mean = std::sqrt(var / double(values.size()));
  return est;
}

}  // namespace

McEstimateW frame_potential_walk_mc(const WalkSpec& spec, int k, int samples,
                                    std::uint64_t seed) {
  validate_spec(spec);
  if (samples < 2) {
    throw std::invalid_argument("frame_potential_walk_mc: need at least two samples");
  }
  std::vector<double> values(static_cast<size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    auto g = make_engine(derive_seed(seed, static_cast<std::uint64_t>(s)));
    const Matrix u = sample_walk_unitary(spec, k, g);
    const Matrix v = sample_walk_unitary(spec, k, g);
    const double overlap = std::abs((u.adjoint() * v).trace());
    values[static_cast<size_t>(s)] = std::pow(overlap, 2 * spec.t);
  }
  return estimate_from_samples(values);
}

McEstimateW frame_potential_haar_mc(int n, int t, int samples,
                                    std::uint64_t seed) {
  if (n < 1 || n > 10 || t < 1 || t > 6) {
    throw std::invalid_argument("frame_potential_haar_mc: parameters out of range");
  }
  if (samples < 2) {
    throw std::invalid_argument("frame_potential_haar_mc: need at least two samples");
  }
  const Index d = Index(1) << n;
  std::vector<double> values(static_cast<size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    const Matrix u =
        sample_haar(d, derive_seed(seed, 2 * static_cast<std::uint64_t>(s)));
    const Matrix v = sample_haar(
        d, derive_seed(seed, 2 * static_cast<std::uint64_t>(s) + 1));
    const double overlap = std::abs((u.adjoint() * v).trace());
    values[static_cast<size_t>(s)] = std::pow(overlap, 2 * t);
  }
  return estimate_from_samples(values);
}

}  // namespace gaplab
