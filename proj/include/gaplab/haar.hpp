#pragma once

#include "gaplab/linear_operator.hpp"
#include "gaplab/permutations.hpp"

namespace gaplab {

// Haar random unitary on C^d via a Gaussian matrix, QR, and the diagonal
// phase fix that makes the distribution exactly invariant.
Matrix sample_haar(Index d, std::uint64_t seed);

// Operator on (C^d)^{tensor t} permuting the tensor copies:
// (r(pi) x)[j_1 .. j_t] = x[j_{pi(1)} .. j_{pi(t)}].
// Satisfies r(pi) r(sigma) = r(pi o sigma) and Tr r(pi) = d^{#cycles(pi)}.
Matrix permutation_operator(const Permutation& pi, Index d);

// vectorize(permutation_operator(pi, d)), the invariant vectors of the
// t-th moment of the Haar measure
Vector permutation_vector(const Permutation& pi, Index d);

// Gram matrix of the permutation vectors over all pi in S_t:
// G(pi, sigma) = d^{#cycles(pi^{-1} o sigma)}, ordered like all_permutations(t)
RealMatrix gram_matrix(Index d, int t);

// The t-th moment of the Haar measure on U(d) as a superoperator on
// vectorized d^t x d^t matrices: the orthogonal projector onto
// span{ vec r(pi) : pi in S_t }.
struct HaarProjector {
  Index d = 0;
  int t = 0;
  Matrix basis;          // orthonormal columns spanning the invariant space
  RealVector gram_eigs;  // ascending eigenvalues of the Gram matrix
  int rank = 0;

  LinearOperator op() const;
  Matrix dense(Index cap = Index(1) << 13) const;
};

HaarProjector haar_projector(Index d, int t);

// d^{-t} sum_pi vec r(pi) vec r(pi)^dagger; its nonzero spectrum equals the
// Gram spectrum divided by d^t
Matrix frame_operator_dense(Index d, int t, Index cap = Index(1) << 13);

// distance of the frame operator from the projector it approximates:
// max over nonzero Gram eigenvalues of |1 - lambda / d^t|
double orthogonality_residual(Index d, int t);

// U^{tensor t} tensor conj(U)^{tensor t} acting on vectorized matrices
Matrix moment_matrix_of_unitary(const Matrix& u, int t);

}  // namespace gaplab
