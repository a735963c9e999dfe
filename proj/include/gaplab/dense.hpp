// dense.hpp - dense complex linear algebra primitives shared by all modules:
// vectorization, partial traces over mixed-radix factors, Schatten norms,
// polar decomposition, PSD checks and the Choi reshuffle.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace gaplab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// problem sizes beyond configured caps (a request that cannot be served
// exactly, as opposed to a failed assertion or a solver breakdown)
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// iterative solver did not reach tolerance; message carries diagnostics
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Matrix dagger(const Matrix& a) { return a.adjoint(); }

double hermiticity_defect(const Matrix& a);
bool is_hermitian(const Matrix& a, double tol = 1e-10);

// vec(|i><j|) = |i> (x) |j>, i.e. row-major flattening: vec(A)[i*m+j] = A(i,j)
Vector vectorize(const Matrix& a);
Matrix devectorize(const Vector& v);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron_pow(const Matrix& a, int k);

// Trace over every tensor factor not listed in `keep`. `dims` are the factor
// dimensions with factor 0 the most significant index (kron order); `keep`
// is a strictly increasing list of factor indices. The kept factors stay in
// their original relative order.
Matrix partial_trace(const Matrix& a, const std::vector<int>& keep,
                     const std::vector<Index>& dims);

enum class Schatten { One, Two, Inf };
double schatten_norm(const Matrix& a, Schatten p);
double operator_norm(const Matrix& a);  // Schatten-infinity

struct PolarInfo {
  bool rank_deficient = false;
  double smallest_sv = 0.0;
};
// unitary factor W of A = W * sqrt(A^dag A); for rank-deficient A the SVD's
// deterministic left/right bases complete the unitary and the info flag is set
Matrix polar_unitary(const Matrix& a, PolarInfo* info = nullptr,
                     double rank_tol = 1e-12);

struct PsdReport {
  bool psd = false;
  double min_eigenvalue = 0.0;
  double herm_defect = 0.0;
};
PsdReport psd_check(const Matrix& a, double tol);

// Choi matrix of the superoperator whose vectorized form is m: with the
// vec convention above, Choi[(k,i),(l,j)] = m[(k,l),(i,j)]
Matrix choi_from_superop(const Matrix& m);

// ascending eigenvalues of a Hermitian matrix; throws if the hermiticity
// defect exceeds herm_tol
RealVector hermitian_eigenvalues(const Matrix& a, double herm_tol = 1e-8);

Matrix random_gaussian_matrix(Index rows, Index cols, std::uint64_t seed);
Vector random_gaussian_vector(Index n, std::uint64_t seed);

// random Hermitian direction; traceless and unit Frobenius norm if requested
Matrix random_hermitian(Index d, std::uint64_t seed, bool traceless = false,
                        bool unit_frobenius = false);

}  // namespace gaplab
