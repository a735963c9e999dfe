#include "gaplab/haar.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <memory>

#include "gaplab/rng.hpp"

namespace gaplab {

Matrix sample_haar(Index d, std::uint64_t seed) {
  Matrix g = random_gaussian_matrix(d, d, seed);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  Matrix r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag < 1e-300) throw SolverError("sample_haar: degenerate draw");
    q.col(j) *= rjj / mag;
  }
  return q;
}

namespace {

Index pow_index(Index base, int exp) {
  Index out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

Matrix permutation_operator(const Permutation& pi, Index d) {
  const int t = static_cast<int>(pi.size());
  const Index dim = pow_index(d, t);
  Matrix r = Matrix::Zero(dim, dim);
  std::vector<Index> digits(t);
  for (Index row = 0; row < dim; ++row) {
    Index rem = row;
    for (int c = t - 1; c >= 0; --c) {
      digits[c] = rem % d;
      rem /= d;
    }
    Index col = 0;
    for (int c = 0; c < t; ++c) col = col * d + digits[pi[c]];
    r(row, col) = 1.0;
  }
  return r;
}

Vector permutation_vector(const Permutation& pi, Index d) {
  return vectorize(permutation_operator(pi, d));
}

RealMatrix gram_matrix(Index d, int t) {
  const auto perms = all_permutations(t);
  const int m = static_cast<int>(perms.size());
  RealMatrix g(m, m);
  for (int a = 0; a < m; ++a) {
    const Permutation inv_a = inverse(perms[a]);
    for (int b = 0; b < m; ++b) {
      const int cycles = cycle_count(compose(inv_a, perms[b]));
      g(a, b) = std::pow(double(d), cycles);
    }
  }
  return g;
}

LinearOperator HaarProjector::op() const {
  auto u = std::make_shared<Matrix>(basis);
  return LinearOperator(basis.rows(), [u](const Vector& x) -> Vector {
    return (*u) * (u->adjoint() * x);
  });
}

Matrix HaarProjector::dense(Index cap) const {
  if (basis.rows() > cap) {
    throw InfeasibleError("HaarProjector::dense: dimension " +
                          std::to_string(basis.rows()) + " exceeds cap " +
                          std::to_string(cap));
  }
  return basis * basis.adjoint();
}

HaarProjector haar_projector(Index d, int t) {
  HaarProjector p;
  p.d = d;
  p.t = t;

  const auto perms = all_permutations(t);
  const int m = static_cast<int>(perms.size());
  const Index dim = pow_index(d, 2 * t);

  Matrix v(dim, m);
  for (int a = 0; a < m; ++a) v.col(a) = permutation_vector(perms[a], d);

  RealMatrix g = gram_matrix(d, t);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(g);
  if (es.info() != Eigen::Success) {
    throw SolverError("haar_projector: Gram eigensolver failed");
  }
  p.gram_eigs = es.eigenvalues();
  const double lmax = p.gram_eigs(m - 1);
  const double cutoff = 1e-9 * lmax;

  std::vector<int> kept;
  for (int i = 0; i < m; ++i)
    if (p.gram_eigs(i) > cutoff) kept.push_back(i);
  p.rank = static_cast<int>(kept.size());

  p.basis.resize(dim, p.rank);
  for (int k = 0; k < p.rank; ++k) {
    const int i = kept[k];
    p.basis.col(k) =
        (v * es.eigenvectors().col(i).cast<Complex>()) / std::sqrt(p.gram_eigs(i));
  }

  const double ortho_defect =
      (p.basis.adjoint() * p.basis - Matrix::Identity(p.rank, p.rank))
          .cwiseAbs()
          .maxCoeff();
  if (ortho_defect > 1e-8) {
    throw SolverError("haar_projector: basis orthonormality defect " +
                      std::to_string(ortho_defect));
  }
  return p;
}

Matrix frame_operator_dense(Index d, int t, Index cap) {
  const auto perms = all_permutations(t);
  const Index dim = pow_index(d, 2 * t);
  if (dim > cap) {
    throw InfeasibleError("frame_operator_dense: dimension " +
                          std::to_string(dim) + " exceeds cap " +
                          std::to_string(cap));
  }
  Matrix s = Matrix::Zero(dim, dim);
  for (const auto& pi : perms) {
    Vector v = permutation_vector(pi, d);
    s.noalias() += v * v.adjoint();
  }
  return s / std::pow(double(d), t);
}

double orthogonality_residual(Index d, int t) {
  RealMatrix g = gram_matrix(d, t);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(g, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw SolverError("orthogonality_residual: Gram eigensolver failed");
  }
  const RealVector eigs = es.eigenvalues();
  const double scale = std::pow(double(d), t);
  const double cutoff = 1e-9 * eigs(eigs.size() - 1);
  double residual = 0.0;
  for (Index i = 0; i < eigs.size(); ++i) {
    if (eigs(i) <= cutoff) continue;
    residual = std::max(residual, std::abs(1.0 - eigs(i) / scale));
  }
  return residual;
}

Matrix moment_matrix_of_unitary(const Matrix& u, int t) {
  return kron(kron_pow(u, t), kron_pow(u.conjugate(), t));
}

}  // namespace gaplab
