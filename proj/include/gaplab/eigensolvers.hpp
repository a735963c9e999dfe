#pragma once

#include <string>
#include <vector>

#include "gaplab/linear_operator.hpp"

namespace gaplab {

struct EigOptions {
  double tol = 1e-10;
  int max_matvecs = 20000;
  int max_basis = 96;
  int keep = 24;
  int block_margin = 4;
  Index dense_cap = Index(1) << 13;
  bool force_iterative = false;
  std::uint64_t seed = 0x5eed5eedULL;
};

struct ExtremalReport {
  double value = 0.0;
  double residual = 0.0;
  int matvecs = 0;
  bool converged = false;
  std::string method;
};

// Largest eigenvalue of a Hermitian operator, orthogonal to the span of
// deflate (columns assumed orthonormal, spanning an invariant subspace).
// Uses a dense solve below dense_cap and thick-restart Lanczos with full
// reorthogonalization above it.
ExtremalReport largest_eigenvalue(const LinearOperator& a, const Matrix& deflate,
                                  const EigOptions& opts = {});

ExtremalReport largest_eigenvalue(const LinearOperator& a,
                                  const EigOptions& opts = {});

// Full ascending spectrum of a Hermitian operator (dense only).
RealVector dense_spectrum(const LinearOperator& a, Index cap = Index(1) << 13);

// Smallest eigenvalue outside a kernel of known dimension, read positionally
// from the dense spectrum.  Requires the bottom kernel_dim eigenvalues to be
// below kernel_tol in magnitude.
double smallest_nonzero_dense(const Matrix& a, int kernel_dim,
                              double kernel_tol = 1e-8);

struct FixedSpaceReport {
  Matrix basis;
  int rank = 0;
  int iterations = 0;
  double residual = 0.0;
};

// Orthonormal basis of the eigenvalue-one eigenspace of a Hermitian
// contraction (spectrum in [-1, 1]).  Runs block power iteration with
// Rayleigh-Ritz extraction; rank is detected from the converged Ritz values.
// Errors out if every block column converges to one, since the guess was
// then too small to certify the rank.
FixedSpaceReport fixed_space(const LinearOperator& a, int rank_guess,
                             const EigOptions& opts = {});

}  // namespace gaplab
