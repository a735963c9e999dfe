#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gaplab/linear_operator.hpp"

namespace gaplab {

// Pauli operator i^phase X^x Z^z on n qubits; bit q of x and z addresses
// qubit q.  Phases live in Z_4.
struct Pauli {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
  int phase = 0;

  bool operator==(const Pauli&) const = default;
};

inline int parity(std::uint32_t bits) { return __builtin_popcount(bits) & 1; }

Pauli pauli_mul(const Pauli& a, const Pauli& b);
bool pauli_commute(const Pauli& a, const Pauli& b);

// the Hermitian representative (-1)^sign i^{popcount(x & z)} X^x Z^z
Pauli hermitian_pauli(std::uint32_t x, std::uint32_t z, int sign);

Matrix pauli_matrix(const Pauli& p, int n);

// Stabilizer tableau: row i < n is the conjugation image of X_i, row n + i
// the image of Z_i.  A row (x, z, sign) encodes the Hermitian Pauli
// (-1)^sign i^{popcount(x & z)} X^x Z^z.
struct TableauRow {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
  std::uint8_t sign = 0;

  bool operator==(const TableauRow&) const = default;
};

struct Tableau {
  int n = 0;
  std::vector<TableauRow> rows;

  static Tableau identity(int n);
  bool operator==(const Tableau&) const = default;
};

// commutation relations of the rows match those of the generators they image
bool tableau_valid(const Tableau& t);

Pauli tableau_row_pauli(const Tableau& t, int row);

// image of an arbitrary Pauli under the tableau's conjugation action
Pauli tableau_conjugate(const Tableau& t, const Pauli& p);

// tableau of U_a U_b given the tableaus of U_a and U_b
Tableau tableau_compose(const Tableau& a, const Tableau& b);

std::vector<std::uint8_t> tableau_bytes(const Tableau& t);
Tableau tableau_from_bytes(const std::vector<std::uint8_t>& bytes);

// |Sp(2n, 2)| = 2^{n^2} prod_{j=1}^{n} (4^j - 1)
std::uint64_t symplectic_order(int n);
// Clifford group order modulo global phases: |Sp(2n, 2)| * 4^n
std::uint64_t clifford_order(int n);

// Index to symplectic-matrix bijection.  Row j of the result is the image
// of basis vector j over the bit layout (x_1, z_1, x_2, z_2, ...).
std::vector<std::vector<std::uint8_t>> symplectic_from_index(std::uint64_t idx, int n);

// tableau with the indexed symplectic part; bit r of sign_bits is the sign
// of row r
Tableau tableau_from_indices(std::uint64_t sp_idx, std::uint32_t sign_bits, int n);

Tableau sample_tableau(int n, std::mt19937_64& g);
Tableau sample_tableau(int n, std::uint64_t seed);

// every tableau on n qubits, n <= 2
std::vector<Tableau> enumerate_tableaus(int n);

// Exact unitary realizing a tableau (n <= 4).  The stabilizer state fixed by
// the Z images provides the first column; X images generate the rest.  The
// global phase is fixed by making the first nonzero amplitude of that state
// real and positive.
Matrix synthesize_unitary(const Tableau& t);

// Projector onto the operators commuting with C^{tensor t} for every
// Clifford C, as a superoperator on vectorized (2^n)^t square matrices.
// Built exactly by averaging the signed permutation action on Pauli string
// tuples over the symplectic group.
struct CliffordProjector {
  int n = 0;
  int t = 0;
  Index dim = 0;
  int rank = 0;
  double kernel_trace = 0.0;
  Matrix basis;  // dim x rank, orthonormal

  LinearOperator op() const;
  Matrix dense(Index cap = Index(1) << 13) const;
};

// the projector matrix in the Pauli string tuple basis; dimension
// (4^n)^(t-1) per side
RealMatrix clifford_commutant_kernel(int n, int t);

CliffordProjector clifford_projector(int n, int t);

// operator norm distance between the Clifford and Haar moment projectors;
// zero when the group is a t-design and exactly one otherwise since the
// Haar invariant space is nested inside the Clifford one
double clifford_design_residual(int n, int t);

// average of |Tr U|^{2t} over the group, exact by enumeration (n <= 2);
// equals the rank of the commutant projector
double clifford_frame_potential_exact(int n, int t);

struct McEstimate {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  int samples = 0;
};

McEstimate clifford_frame_potential_mc(int n, int t, int samples,
                                       std::uint64_t seed);

// closed-form coefficients of the twirl identity
//   E_C Tr[(Tr_{[2..n]} C H C^dagger)^2] = c1 Tr(H^2) + c2 (Tr H)^2
struct TwirlCoefficients {
  double c1 = 0.0;
  double c2 = 0.0;
};
TwirlCoefficients twirl_closed_form(int n);

// left side of the twirl identity, exact by group enumeration (n <= 2)
double reduced_square_twirl_exact(const Matrix& h, int n);
McEstimate reduced_square_twirl_mc(const Matrix& h, int n, int samples,
                                   std::uint64_t seed);

}  // namespace gaplab
