#include "gaplab/eigensolvers.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "gaplab/rng.hpp"

namespace gaplab {

namespace {

Vector random_unit(Index dim, std::uint64_t seed) {
  Vector v = random_gaussian_vector(dim, seed);
  const double nv = v.norm();
  if (nv < 1e-14) throw SolverError("random_unit: degenerate draw");
  return v / nv;
}

void project_out(const Matrix& y, Vector& v) {
  if (y.cols() == 0) return;
  v.noalias() -= y * (y.adjoint() * v);
}

// Modified Gram-Schmidt with one re-orthogonalization pass.  Returns the
// number of columns kept; near-dependent columns are replaced by fresh
// random directions.
void orthonormalize_columns(Matrix& q, std::uint64_t seed) {
  for (Index j = 0; j < q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < j; ++i) {
        const Complex c = q.col(i).dot(q.col(j));
        q.col(j) -= c * q.col(i);
      }
    }
    double nj = q.col(j).norm();
    int tries = 0;
    while (nj < 1e-10 && tries < 8) {
      q.col(j) = random_unit(q.rows(), derive_seed(seed, 101 + 13 * j + tries));
      for (int pass = 0; pass < 2; ++pass) {
        for (Index i = 0; i < j; ++i) {
          const Complex c = q.col(i).dot(q.col(j));
          q.col(j) -= c * q.col(i);
        }
      }
      nj = q.col(j).norm();
      ++tries;
    }
    if (nj < 1e-10) throw SolverError("orthonormalize_columns: rank collapse");
    q.col(j) /= nj;
  }
}

Matrix apply_columns(const LinearOperator& a, const Matrix& q, int* matvecs) {
  Matrix out(q.rows(), q.cols());
  for (Index j = 0; j < q.cols(); ++j) {
    out.col(j) = a(Vector(q.col(j)));
    if (matvecs) ++*matvecs;
  }
  return out;
}

ExtremalReport dense_largest(const LinearOperator& a, const Matrix& deflate,
                             const EigOptions& opts) {
  ExtremalReport rep;
  rep.method = "dense";
  Matrix ad = a.to_dense(opts.dense_cap);
  if (deflate.cols() > 0) {
    ad -= deflate * (deflate.adjoint() * ad);
    ad -= (ad * deflate) * deflate.adjoint();
  }
  ad = 0.5 * (ad + ad.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(ad, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) {
    throw SolverError("dense_largest: eigensolver failed");
  }
  const Index top = ad.rows() - 1;
  rep.value = es.eigenvalues()(top);
  Vector y = es.eigenvectors().col(top);
  rep.residual = (ad * y - rep.value * y).norm();
  rep.matvecs = static_cast<int>(ad.rows());
  rep.converged = true;
  return rep;
}

struct RitzState {
  RealVector values;   // descending
  Matrix vectors;      // small rotation, columns match values
};

RitzState ritz_of(const Matrix& h, Index j) {
  Matrix hj = 0.5 * (h.topLeftCorner(j, j) + h.topLeftCorner(j, j).adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(hj, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) {
    throw SolverError("lanczos: projected eigensolver failed");
  }
  RitzState st;
  st.values = es.eigenvalues().reverse();
  st.vectors = es.eigenvectors().rowwise().reverse();
  return st;
}

ExtremalReport lanczos_largest(const LinearOperator& a, const Matrix& deflate,
                               const EigOptions& opts) {
  ExtremalReport rep;
  rep.method = "lanczos";
  const Index dim = a.dim();
  const int m = std::max(8, opts.max_basis);
  const int keep = std::min(std::max(2, opts.keep), m - 4);

  Matrix v(dim, m);
  Matrix h = Matrix::Zero(m, m);
  Vector start = random_unit(dim, opts.seed);
  project_out(deflate, start);
  if (start.norm() < 1e-8) {
    throw SolverError("lanczos: start vector lies in the deflation space");
  }
  start.normalize();
  v.col(0) = start;

  int j = 1;
  const double breakdown = 1e-12;

  while (rep.matvecs < opts.max_matvecs) {
    // expand one column from the current last basis vector
    Vector w = a(Vector(v.col(j - 1)));
    ++rep.matvecs;
    project_out(deflate, w);
    for (int pass = 0; pass < 2; ++pass) {
      Vector coeff = v.leftCols(j).adjoint() * w;
      if (pass == 0) {
        // coeff(i) = v_i^dagger A v_{j-1}; store the column and its mirror so
        // the projected matrix stays Hermitian without halving at the
        // symmetrization step
        h.col(j - 1).head(j) = coeff;
        h.row(j - 1).head(j) = coeff.adjoint();
      }
      w.noalias() -= v.leftCols(j) * coeff;
    }
    const double beta = w.norm();

    const bool full = (j == m);
    const bool exhausted = (beta <= breakdown);
    if (!full && !exhausted) {
      v.col(j) = w / beta;
      h(j, j - 1) = beta;
      h(j - 1, j) = beta;
      ++j;
      continue;
    }

    RitzState st = ritz_of(h, j);
    const double theta = st.values(0);
    const double coupling = exhausted ? 0.0 : std::abs(beta * st.vectors(j - 1, 0));
    const double scale = std::max(1.0, std::abs(theta));
    if (coupling <= opts.tol * scale || exhausted) {
      Vector y = v.leftCols(j) * st.vectors.col(0);
      y.normalize();
      Vector ay = a(y);
      ++rep.matvecs;
      project_out(deflate, ay);
      rep.value = theta;
      rep.residual = (ay - theta * y).norm();
      if (rep.residual <= std::max(opts.tol * scale * 10.0, 1e-9)) {
        rep.converged = true;
        return rep;
      }
      if (exhausted) {
        // restart from a fresh direction orthogonal to everything seen
        Vector fresh = random_unit(dim, derive_seed(opts.seed, 977 + rep.matvecs));
        project_out(deflate, fresh);
        for (int pass = 0; pass < 2; ++pass) {
          Vector coeff = v.leftCols(j).adjoint() * fresh;
          fresh.noalias() -= v.leftCols(j) * coeff;
        }
        if (fresh.norm() < 1e-8) {
          rep.converged = true;  // operator exhausted on the whole complement
          return rep;
        }
        fresh.normalize();
        const int k = std::min(keep, j);
        Matrix yk = v.leftCols(j) * st.vectors.leftCols(k);
        v.leftCols(k) = yk;
        v.col(k) = fresh;
        h.setZero();
        for (int i = 0; i < k; ++i) h(i, i) = st.values(i);
        j = k + 1;
        continue;
      }
    }

    // thick restart: keep the leading Ritz vectors plus the residual direction
    const int k = std::min(keep, j - 1);
    Matrix yk = v.leftCols(j) * st.vectors.leftCols(k);
    v.leftCols(k) = yk;
    v.col(k) = w / beta;
    h.setZero();
    for (int i = 0; i < k; ++i) h(i, i) = st.values(i);
    // coupling entries between the kept Ritz vectors and the residual
    // direction are re-derived by the full projection on the next expansion
    j = k + 1;
  }

  throw SolverError("lanczos: matvec budget exhausted before convergence");
}

}  // namespace

ExtremalReport largest_eigenvalue(const LinearOperator& a, const Matrix& deflate,
                                  const EigOptions& opts) {
  if (deflate.cols() > 0 && deflate.rows() != a.dim()) {
    throw std::invalid_argument("largest_eigenvalue: deflation basis dimension mismatch");
  }
  if (a.dim() <= opts.dense_cap && !opts.force_iterative) {
    return dense_largest(a, deflate, opts);
  }
  return lanczos_largest(a, deflate, opts);
}

ExtremalReport largest_eigenvalue(const LinearOperator& a, const EigOptions& opts) {
  return largest_eigenvalue(a, Matrix(a.dim(), 0), opts);
}

RealVector dense_spectrum(const LinearOperator& a, Index cap) {
  Matrix ad = a.to_dense(cap);
  return hermitian_eigenvalues(ad, 1e-8);
}

double smallest_nonzero_dense(const Matrix& a, int kernel_dim, double kernel_tol) {
  RealVector eigs = hermitian_eigenvalues(a, 1e-8);
  if (kernel_dim < 0 || kernel_dim >= eigs.size()) {
    throw std::invalid_argument("smallest_nonzero_dense: kernel dimension out of range");
  }
  for (int i = 0; i < kernel_dim; ++i) {
    if (std::abs(eigs(i)) > kernel_tol) {
      throw SolverError("smallest_nonzero_dense: expected kernel eigenvalue " +
                        std::to_string(eigs(i)) + " exceeds tolerance");
    }
  }
  return eigs(kernel_dim);
}

FixedSpaceReport fixed_space(const LinearOperator& a, int rank_guess,
                             const EigOptions& opts) {
  if (rank_guess < 1) {
    throw std::invalid_argument("fixed_space: rank guess must be positive");
  }
  const Index dim = a.dim();
  const int b = rank_guess + std::max(1, opts.block_margin);
  if (b > dim) {
    throw std::invalid_argument("fixed_space: block exceeds dimension");
  }

  Matrix q(dim, b);
  for (int j = 0; j < b; ++j)
    q.col(j) = random_gaussian_vector(dim, derive_seed(opts.seed, j));
  orthonormalize_columns(q, opts.seed);

  FixedSpaceReport rep;
  int matvecs = 0;
  const int inner = 3;
  int stable_rank = -1;
  int stable_count = 0;

  while (matvecs < opts.max_matvecs) {
    for (int s = 0; s < inner; ++s) q = apply_columns(a, q, &matvecs);
    orthonormalize_columns(q, derive_seed(opts.seed, 7000 + rep.iterations));
    ++rep.iterations;

    Matrix aq = apply_columns(a, q, &matvecs);
    Matrix small = q.adjoint() * aq;
    small = 0.5 * (small + small.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(small, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) {
      throw SolverError("fixed_space: projected eigensolver failed");
    }
    RealVector mu = es.eigenvalues().reverse();
    Matrix rot = es.eigenvectors().rowwise().reverse();
    Matrix qr = q * rot;
    Matrix aqr = aq * rot;

    int detected = 0;
    double worst = 0.0;
    for (int i = 0; i < b; ++i) {
      if (mu(i) < 1.0 - 1e-7) break;
      const double res = (aqr.col(i) - mu(i) * qr.col(i)).norm();
      if (res > std::max(opts.tol, 1e-9)) {
        worst = std::max(worst, res);
        break;
      }
      worst = std::max(worst, res);
      ++detected;
    }

    if (detected == b) {
      throw SolverError("fixed_space: every block column converged to one; "
                        "increase the rank guess");
    }

    if (detected > 0 && detected == stable_rank &&
        mu(detected) < 1.0 - 1e-6) {
      ++stable_count;
    } else {
      stable_rank = detected;
      stable_count = 0;
    }

    if (stable_count >= 2) {
      rep.rank = detected;
      rep.basis = qr.leftCols(detected);
      orthonormalize_columns(rep.basis, derive_seed(opts.seed, 9000));
      rep.residual = worst;
      return rep;
    }
    q = qr;
  }

  throw SolverError("fixed_space: matvec budget exhausted before convergence");
}

}  // namespace gaplab
