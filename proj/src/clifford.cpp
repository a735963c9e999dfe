#include "gaplab/clifford.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <memory>

#include "gaplab/haar.hpp"
#include "gaplab/rng.hpp"

namespace gaplab {

namespace {

constexpr int kMaxQubits = 16;

void check_qubits(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("qubit count " + std::to_string(n) +
                                " out of supported range");
  }
}

}  // namespace

Pauli pauli_mul(const Pauli& a, const Pauli& b) {
  Pauli r;
  r.x = a.x ^ b.x;
  r.z = a.z ^ b.z;
  // moving X^{b.x} through Z^{a.z} contributes (-1)^{a.z . b.x}
  r.phase = (a.phase + b.phase + 2 * parity(a.z & b.x)) & 3;
  return r;
}

bool pauli_commute(const Pauli& a, const Pauli& b) {
  return ((parity(a.x & b.z) + parity(a.z & b.x)) & 1) == 0;
}

Pauli hermitian_pauli(std::uint32_t x, std::uint32_t z, int sign) {
  Pauli p;
  p.x = x;
  p.z = z;
  p.phase = (__builtin_popcount(x & z) + 2 * (sign & 1)) & 3;
  return p;
}

Matrix pauli_matrix(const Pauli& p, int n) {
  check_qubits(n);
  Matrix sx(2, 2), sz(2, 2), si = Matrix::Identity(2, 2);
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;
  Matrix out = Matrix::Identity(1, 1);
  for (int q = 0; q < n; ++q) {
    const bool bx = (p.x >> q) & 1;
    const bool bz = (p.z >> q) & 1;
    Matrix factor = si;
    if (bx && bz) factor = sx * sz;
    else if (bx) factor = sx;
    else if (bz) factor = sz;
    out = kron(out, factor);
  }
  const Complex i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return i_pow[p.phase & 3] * out;
}

Tableau Tableau::identity(int n) {
  check_qubits(n);
  Tableau t;
  t.n = n;
  t.rows.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    t.rows[i].x = 1u << i;
    t.rows[n + i].z = 1u << i;
  }
  return t;
}

Pauli tableau_row_pauli(const Tableau& t, int row) {
  const TableauRow& r = t.rows.at(row);
  return hermitian_pauli(r.x, r.z, r.sign);
}

bool tableau_valid(const Tableau& t) {
  if (static_cast<int>(t.rows.size()) != 2 * t.n) return false;
  for (int a = 0; a < 2 * t.n; ++a) {
    Pauli pa = tableau_row_pauli(t, a);
    const std::uint32_t mask = (t.n == 32) ? ~0u : ((1u << t.n) - 1);
    if ((pa.x | pa.z) & ~mask) return false;
    for (int b = a + 1; b < 2 * t.n; ++b) {
      Pauli pb = tableau_row_pauli(t, b);
      const bool should_commute = (b != a + t.n);
      if (pauli_commute(pa, pb) != should_commute) return false;
    }
  }
  return true;
}

Pauli tableau_conjugate(const Tableau& t, const Pauli& p) {
  Pauli acc;
  acc.phase = p.phase & 3;
  for (int i = 0; i < t.n; ++i)
    if ((p.x >> i) & 1) acc = pauli_mul(acc, tableau_row_pauli(t, i));
  for (int i = 0; i < t.n; ++i)
    if ((p.z >> i) & 1) acc = pauli_mul(acc, tableau_row_pauli(t, t.n + i));
  return acc;
}

Tableau tableau_compose(const Tableau& a, const Tableau& b) {
  if (a.n != b.n) throw std::invalid_argument("tableau_compose: size mismatch");
  Tableau r;
  r.n = a.n;
  r.rows.resize(2 * a.n);
  for (int row = 0; row < 2 * a.n; ++row) {
    Pauli img = tableau_conjugate(a, tableau_row_pauli(b, row));
    const int herm_phase = __builtin_popcount(img.x & img.z) & 3;
    const int diff = (img.phase - herm_phase) & 3;
    if (diff & 1) throw SolverError("tableau_compose: non-Hermitian image");
    r.rows[row].x = img.x;
    r.rows[row].z = img.z;
    r.rows[row].sign = static_cast<std::uint8_t>(diff >> 1);
  }
  return r;
}

std::vector<std::uint8_t> tableau_bytes(const Tableau& t) {
  std::vector<std::uint8_t> out;
  out.push_back(static_cast<std::uint8_t>(t.n));
  for (const auto& r : t.rows) {
    for (int b = 0; b < 4; ++b) out.push_back((r.x >> (8 * b)) & 0xff);
    for (int b = 0; b < 4; ++b) out.push_back((r.z >> (8 * b)) & 0xff);
    out.push_back(r.sign);
  }
  return out;
}

Tableau tableau_from_bytes(const std::vector<std::uint8_t>& bytes) {
  if (bytes.empty()) throw std::invalid_argument("tableau_from_bytes: empty input");
  Tableau t;
  t.n = bytes[0];
  check_qubits(t.n);
  const size_t expected = 1 + static_cast<size_t>(2 * t.n) * 9;
  if (bytes.size() != expected) {
    throw std::invalid_argument("tableau_from_bytes: length mismatch");
  }
  t.rows.resize(2 * t.n);
  size_t pos = 1;
  for (auto& r : t.rows) {
    r.x = 0;
    r.z = 0;
    for (int b = 0; b < 4; ++b) r.x |= std::uint32_t(bytes[pos++]) << (8 * b);
    for (int b = 0; b < 4; ++b) r.z |= std::uint32_t(bytes[pos++]) << (8 * b);
    r.sign = bytes[pos++];
  }
  return t;
}

std::uint64_t symplectic_order(int n) {
  if (n < 1 || n > 5) {
    throw std::invalid_argument("symplectic_order: group order overflows past five qubits");
  }
  std::uint64_t order = 1;
  for (int j = 1; j <= n; ++j) {
    order *= (std::uint64_t(1) << (2 * j)) - 1;
    order <<= (2 * j - 1);
  }
  return order;
}

std::uint64_t clifford_order(int n) {
  return symplectic_order(n) << (2 * n);
}

namespace {

using BitVec = std::vector<std::uint8_t>;

int sp_inner(const BitVec& v, const BitVec& w) {
  int acc = 0;
  for (size_t i = 0; i < v.size() / 2; ++i) {
    acc += v[2 * i] * w[2 * i + 1];
    acc += w[2 * i] * v[2 * i + 1];
  }
  return acc & 1;
}

BitVec transvect(const BitVec& h, const BitVec& v) {
  if (sp_inner(h, v) == 0) return v;
  BitVec out = v;
  for (size_t i = 0; i < v.size(); ++i) out[i] ^= h[i];
  return out;
}

BitVec int_to_bits(std::uint64_t value, int width) {
  BitVec out(width, 0);
  for (int j = 0; j < width; ++j) out[j] = (value >> j) & 1;
  return out;
}

// two transvections mapping x to y; either may be zero (the identity)
std::pair<BitVec, BitVec> find_transvection(const BitVec& x, const BitVec& y) {
  const size_t nn = x.size();
  BitVec zero(nn, 0);
  if (x == y) return {zero, zero};
  if (sp_inner(x, y) == 1) {
    BitVec h(nn, 0);
    for (size_t i = 0; i < nn; ++i) h[i] = x[i] ^ y[i];
    return {h, zero};
  }
  BitVec z(nn, 0);
  // a qubit pair where both vectors have support
  for (size_t i = 0; i < nn / 2; ++i) {
    const size_t ii = 2 * i;
    if ((x[ii] || x[ii + 1]) && (y[ii] || y[ii + 1])) {
      z[ii] = x[ii] ^ y[ii];
      z[ii + 1] = x[ii + 1] ^ y[ii + 1];
      if (z[ii] == 0 && z[ii + 1] == 0) {
        z[ii + 1] = 1;
        if (x[ii] != x[ii + 1]) z[ii] = 1;
      }
      BitVec h1(nn), h2(nn);
      for (size_t k = 0; k < nn; ++k) {
        h1[k] = x[k] ^ z[k];
        h2[k] = y[k] ^ z[k];
      }
      return {h1, h2};
    }
  }
  // otherwise pick an intermediate through disjoint supports
  for (size_t i = 0; i < nn / 2; ++i) {
    const size_t ii = 2 * i;
    if ((x[ii] || x[ii + 1]) && !(y[ii] || y[ii + 1])) {
      if (x[ii] == x[ii + 1]) {
        z[ii + 1] = 1;
      } else {
        z[ii + 1] = x[ii];
        z[ii] = x[ii + 1];
      }
      break;
    }
  }
  for (size_t i = 0; i < nn / 2; ++i) {
    const size_t ii = 2 * i;
    if (!(x[ii] || x[ii + 1]) && (y[ii] || y[ii + 1])) {
      if (y[ii] == y[ii + 1]) {
        z[ii + 1] = 1;
      } else {
        z[ii + 1] = y[ii];
        z[ii] = y[ii + 1];
      }
      break;
    }
  }
  BitVec h1(nn), h2(nn);
  for (size_t k = 0; k < nn; ++k) {
    h1[k] = x[k] ^ z[k];
    h2[k] = y[k] ^ z[k];
  }
  return {h1, h2};
}

}  // namespace

std::vector<BitVec> symplectic_from_index(std::uint64_t idx, int n) {
  check_qubits(n);
  if (idx >= symplectic_order(n)) {
    throw std::invalid_argument("symplectic_from_index: index out of range");
  }
  const int nn = 2 * n;
  const std::uint64_t s = (std::uint64_t(1) << nn) - 1;
  const std::uint64_t k = (idx % s) + 1;
  idx /= s;

  BitVec f1 = int_to_bits(k, nn);
  BitVec e1(nn, 0);
  e1[0] = 1;
  auto [t0, t1] = find_transvection(e1, f1);

  const std::uint64_t bit_block = idx & ((std::uint64_t(1) << (nn - 1)) - 1);
  BitVec bits = int_to_bits(bit_block, nn - 1);

  BitVec eprime = e1;
  for (int j = 2; j < nn; ++j) eprime[j] = bits[j - 1];
  BitVec h0 = transvect(t0, eprime);
  h0 = transvect(t1, h0);
  if (bits[0] == 1) std::fill(f1.begin(), f1.end(), 0);

  std::vector<BitVec> g(nn, BitVec(nn, 0));
  if (n == 1) {
    g[0][0] = 1;
    g[1][1] = 1;
  } else {
    auto inner_g = symplectic_from_index(idx >> (nn - 1), n - 1);
    g[0][0] = 1;
    g[1][1] = 1;
    for (int r = 0; r < nn - 2; ++r)
      for (int c = 0; c < nn - 2; ++c) g[r + 2][c + 2] = inner_g[r][c];
  }
  for (int r = 0; r < nn; ++r) {
    g[r] = transvect(t0, g[r]);
    g[r] = transvect(t1, g[r]);
    g[r] = transvect(h0, g[r]);
    g[r] = transvect(f1, g[r]);
  }
  return g;
}

Tableau tableau_from_indices(std::uint64_t sp_idx, std::uint32_t sign_bits, int n) {
  auto g = symplectic_from_index(sp_idx, n);
  Tableau t;
  t.n = n;
  t.rows.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    for (int q = 0; q < n; ++q) {
      t.rows[i].x |= std::uint32_t(g[2 * i][2 * q]) << q;
      t.rows[i].z |= std::uint32_t(g[2 * i][2 * q + 1]) << q;
      t.rows[n + i].x |= std::uint32_t(g[2 * i + 1][2 * q]) << q;
      t.rows[n + i].z |= std::uint32_t(g[2 * i + 1][2 * q + 1]) << q;
    }
    t.rows[i].sign = (sign_bits >> i) & 1;
    t.rows[n + i].sign = (sign_bits >> (n + i)) & 1;
  }
  return t;
}

Tableau sample_tableau(int n, std::mt19937_64& g) {
  const std::uint64_t sp_idx = uniform_index(g, symplectic_order(n));
  const auto sign_bits =
      static_cast<std::uint32_t>(uniform_index(g, std::uint64_t(1) << (2 * n)));
  return tableau_from_indices(sp_idx, sign_bits, n);
}

Tableau sample_tableau(int n, std::uint64_t seed) {
  auto g = make_engine(seed);
  return sample_tableau(n, g);
}

std::vector<Tableau> enumerate_tableaus(int n) {
  if (n > 2) {
    throw InfeasibleError("enumerate_tableaus: group too large beyond two qubits");
  }
  const std::uint64_t sp = symplectic_order(n);
  const std::uint32_t signs = 1u << (2 * n);
  std::vector<Tableau> out;
  out.reserve(sp * signs);
  for (std::uint64_t i = 0; i < sp; ++i)
    for (std::uint32_t s = 0; s < signs; ++s)
      out.push_back(tableau_from_indices(i, s, n));
  return out;
}

Matrix synthesize_unitary(const Tableau& t) {
  if (t.n > 4) {
    throw InfeasibleError("synthesize_unitary: dimension too large beyond four qubits");
  }
  if (!tableau_valid(t)) {
    throw std::invalid_argument("synthesize_unitary: invalid tableau");
  }
  const int n = t.n;
  const Index d = Index(1) << n;

  std::vector<Matrix> ximg(n), zimg(n);
  for (int i = 0; i < n; ++i) {
    ximg[i] = pauli_matrix(tableau_row_pauli(t, i), n);
    zimg[i] = pauli_matrix(tableau_row_pauli(t, n + i), n);
  }

  // stabilizer state fixed by every Z image
  Vector psi;
  for (Index e = 0; e < d; ++e) {
    Vector v = Vector::Zero(d);
    v(e) = 1.0;
    for (int i = 0; i < n; ++i) v = 0.5 * (v + zimg[i] * v);
    if (v.norm() > 1e-6) {
      psi = v / v.norm();
      break;
    }
  }
  if (psi.size() == 0) throw SolverError("synthesize_unitary: no stabilizer state found");
  for (Index k = 0; k < d; ++k) {
    if (std::abs(psi(k)) > 1e-9) {
      psi *= std::conj(psi(k)) / std::abs(psi(k));
      break;
    }
  }

  Matrix u(d, d);
  for (Index col = 0; col < d; ++col) {
    Vector v = psi;
    for (int i = 0; i < n; ++i)
      if ((col >> (n - 1 - i)) & 1) v = ximg[i] * v;
    u.col(col) = v;
  }
  const double defect = (u.adjoint() * u - Matrix::Identity(d, d)).norm();
  if (defect > 1e-9) {
    throw SolverError("synthesize_unitary: output is not unitary, defect " +
                      std::to_string(defect));
  }
  return u;
}

namespace {

struct PauliImageTable {
  std::vector<std::uint32_t> image;  // label -> label
  std::vector<std::int8_t> sign;    // label -> +-1
};

// conjugation action of a tableau on all 4^n Hermitian Pauli classes
PauliImageTable pauli_images(const Tableau& t) {
  const int n = t.n;
  const std::uint32_t labels = 1u << (2 * n);
  const std::uint32_t xmask = (1u << n) - 1;
  PauliImageTable table;
  table.image.resize(labels);
  table.sign.resize(labels);
  for (std::uint32_t v = 0; v < labels; ++v) {
    const std::uint32_t x = v & xmask;
    const std::uint32_t z = v >> n;
    Pauli img = tableau_conjugate(t, hermitian_pauli(x, z, 0));
    const int herm_phase = __builtin_popcount(img.x & img.z) & 3;
    const int diff = (img.phase - herm_phase) & 3;
    if (diff & 1) throw SolverError("pauli_images: non-Hermitian image");
    table.image[v] = img.x | (img.z << n);
    table.sign[v] = (diff >> 1) ? -1 : 1;
  }
  return table;
}

Index tuple_count(int n, int t) {
  Index m = 1;
  for (int c = 0; c < t - 1; ++c) m *= Index(1) << (2 * n);
  return m;
}

}  // namespace

RealMatrix clifford_commutant_kernel(int n, int t) {
  check_qubits(n);
  if (t < 1 || t > 6) {
    throw std::invalid_argument("clifford_commutant_kernel: order out of range");
  }
  const Index m = tuple_count(n, t);
  if (m > (Index(1) << 13)) {
    throw InfeasibleError("clifford_commutant_kernel: tuple basis too large");
  }
  const std::uint32_t labels = 1u << (2 * n);
  const std::uint64_t sp = symplectic_order(n);
  if (sp > (std::uint64_t(1) << 21)) {
    throw InfeasibleError("clifford_commutant_kernel: group too large to enumerate");
  }

  RealMatrix k = RealMatrix::Zero(m, m);
  std::vector<Index> digits(std::max(1, t - 1));
  for (std::uint64_t s = 0; s < sp; ++s) {
    const Tableau tab = tableau_from_indices(s, 0, n);
    const PauliImageTable table = pauli_images(tab);
    for (Index b = 0; b < m; ++b) {
      Index rem = b;
      std::uint32_t last = 0;
      Index image_index = 0;
      int sign = 1;
      for (int c = t - 2; c >= 0; --c) {
        digits[c] = rem % labels;
        rem /= labels;
      }
      for (int c = 0; c < t - 1; ++c) {
        const auto v = static_cast<std::uint32_t>(digits[c]);
        last ^= v;
        image_index = image_index * labels + table.image[v];
        sign *= table.sign[v];
      }
      sign *= table.sign[last];
      k(image_index, b) += sign;
    }
  }
  k /= double(sp);
  return k;
}

LinearOperator CliffordProjector::op() const {
  auto u = std::make_shared<Matrix>(basis);
  return LinearOperator(dim, [u](const Vector& x) -> Vector {
    return (*u) * (u->adjoint() * x);
  });
}

Matrix CliffordProjector::dense(Index cap) const {
  if (dim > cap) {
    throw InfeasibleError("CliffordProjector::dense: dimension " +
                          std::to_string(dim) + " exceeds cap " +
                          std::to_string(cap));
  }
  return basis * basis.adjoint();
}

CliffordProjector clifford_projector(int n, int t) {
  CliffordProjector p;
  p.n = n;
  p.t = t;
  const Index d = Index(1) << n;
  Index dim = 1;
  for (int c = 0; c < 2 * t; ++c) dim *= d;
  p.dim = dim;

  RealMatrix k = clifford_commutant_kernel(n, t);
  const Index m = k.rows();
  p.kernel_trace = k.trace();
  const int rank = static_cast<int>(std::llround(p.kernel_trace));
  if (std::abs(p.kernel_trace - rank) > 1e-6) {
    throw SolverError("clifford_projector: non-integer kernel trace " +
                      std::to_string(p.kernel_trace));
  }
  p.rank = rank;

  // orthonormal basis of the kernel's range from a random sketch
  const Index probes = std::min<Index>(m, rank + 8);
  RealMatrix sketch(m, probes);
  {
    auto g = make_engine(0xc11ff0adULL);
    for (Index j = 0; j < probes; ++j)
      for (Index i = 0; i < m; ++i) sketch(i, j) = gaussian(g);
  }
  RealMatrix ks = k * sketch;
  Eigen::ColPivHouseholderQR<RealMatrix> qr(ks);
  RealMatrix q = qr.householderQ() * RealMatrix::Identity(m, rank);
  for (Index j = 0; j < rank; ++j) {
    const double res = (k * q.col(j) - q.col(j)).norm();
    if (res > 1e-8) {
      throw SolverError("clifford_projector: range extraction residual " +
                        std::to_string(res));
    }
  }

  // expand the tuple-basis coefficients into global vectors; each Pauli
  // string tuple contributes d^t sparse entries of unit modulus
  const int labels_bits = 2 * n;
  const std::uint32_t labels = 1u << labels_bits;
  const std::uint32_t xmask = (1u << n) - 1;
  Index dt = 1;
  for (int c = 0; c < t; ++c) dt *= d;
  const double norm = 1.0 / std::sqrt(double(dt));

  // Pauli labels address qubit q at bit q, while basis states put qubit 0 at
  // the most significant bit; reverse label bits before acting on indices
  std::vector<std::uint32_t> rev(d);
  for (Index v = 0; v < d; ++v) {
    std::uint32_t r = 0;
    for (int q = 0; q < n; ++q)
      if ((v >> q) & 1) r |= 1u << (n - 1 - q);
    rev[v] = r;
  }

  p.basis = Matrix::Zero(dim, rank);
  std::vector<std::uint32_t> vs(t);
  const Complex i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (Index b = 0; b < m; ++b) {
    bool used = false;
    for (Index j = 0; j < rank; ++j)
      if (std::abs(q(b, j)) > 1e-14) used = true;
    if (!used) continue;

    Index rem = b;
    std::uint32_t last = 0;
    for (int c = t - 2; c >= 0; --c) {
      vs[c] = static_cast<std::uint32_t>(rem % labels);
      rem /= labels;
      last ^= vs[c];
    }
    if (t >= 1) vs[t - 1] = last;

    for (Index col = 0; col < dt; ++col) {
      // apply the Pauli string to |col>, copy by copy
      Index row = 0;
      int phase = 0;
      int minus = 0;
      Index crem = col;
      std::vector<Index> jc(t);
      for (int c = t - 1; c >= 0; --c) {
        jc[c] = crem % d;
        crem /= d;
      }
      for (int c = 0; c < t; ++c) {
        const std::uint32_t x = vs[c] & xmask;
        const std::uint32_t z = vs[c] >> n;
        phase += __builtin_popcount(x & z);
        minus ^= parity(rev[z] & static_cast<std::uint32_t>(jc[c]));
        row = row * d + (jc[c] ^ rev[x]);
      }
      Complex value = i_pow[phase & 3] * (minus ? -1.0 : 1.0) * norm;
      const Index idx = row * dt + col;
      for (Index j = 0; j < rank; ++j) {
        if (q(b, j) != 0.0) p.basis(idx, j) += q(b, j) * value;
      }
    }
  }

  const double ortho_defect =
      (p.basis.adjoint() * p.basis - Matrix::Identity(rank, rank))
          .cwiseAbs()
          .maxCoeff();
  if (ortho_defect > 1e-8) {
    throw SolverError("clifford_projector: basis orthonormality defect " +
                      std::to_string(ortho_defect));
  }
  return p;
}

double clifford_design_residual(int n, int t) {
  CliffordProjector pc = clifford_projector(n, t);
  HaarProjector ph = haar_projector(Index(1) << n, t);

  // the Haar invariant space must sit inside the Clifford one
  Matrix overlap = pc.basis.adjoint() * ph.basis;  // rank_c x rank_h
  const double nesting =
      (ph.basis - pc.basis * overlap).cwiseAbs().maxCoeff();
  if (nesting > 1e-8) {
    throw SolverError("clifford_design_residual: invariant spaces not nested");
  }

  // || P_cl - P_haar || = 1 - lambda_min of the compressed Haar projector
  Matrix compressed = overlap * overlap.adjoint();
  RealVector eigs = hermitian_eigenvalues(compressed);
  return 1.0 - eigs(0);
}

double clifford_frame_potential_exact(int n, int t) {
  const auto tabs = enumerate_tableaus(n);
  double acc = 0.0;
  for (const auto& tab : tabs) {
    const Complex tr = synthesize_unitary(tab).trace();
    acc += std::pow(std::norm(tr), t);
  }
  return acc / double(tabs.size());
}

McEstimate clifford_frame_potential_mc(int n, int t, int samples,
                                       std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("frame potential: too few samples");
  double acc = 0.0, acc2 = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Tableau tab = sample_tableau(n, derive_seed(seed, s));
    const Complex tr = synthesize_unitary(tab).trace();
    const double val = std::pow(std::norm(tr), t);
    acc += val;
    acc2 += val * val;
  }
  McEstimate est;
  est.samples = samples;
  est.mean = acc / samples;
  const double var = std::max(0.0, acc2 / samples - est.mean * est.mean);
  est.stderr_of_mean = std::sqrt(var / samples);
  return est;
}

TwirlCoefficients twirl_closed_form(int n) {
  check_qubits(n);
  const double d = std::pow(2.0, n);
  TwirlCoefficients c;
  c.c1 = 1.5 / (d - 1.0 / d);
  c.c2 = (d * d / 2.0 - 2.0) / (d * d - 1.0);
  return c;
}

namespace {

double reduced_square(const Matrix& a, int n) {
  const std::vector<Index> dims = {2, Index(1) << (n - 1)};
  Matrix w = (n == 1) ? a : partial_trace(a, {0}, dims);
  return (w * w).trace().real();
}

}  // namespace

double reduced_square_twirl_exact(const Matrix& h, int n) {
  const Index d = Index(1) << n;
  if (h.rows() != d || h.cols() != d) {
    throw std::invalid_argument("reduced_square_twirl_exact: dimension mismatch");
  }
  const auto tabs = enumerate_tableaus(n);
  double acc = 0.0;
  for (const auto& tab : tabs) {
    Matrix u = synthesize_unitary(tab);
    acc += reduced_square(u * h * u.adjoint(), n);
  }
  return acc / double(tabs.size());
}

McEstimate reduced_square_twirl_mc(const Matrix& h, int n, int samples,
                                   std::uint64_t seed) {
  const Index d = Index(1) << n;
  if (h.rows() != d || h.cols() != d) {
    throw std::invalid_argument("reduced_square_twirl_mc: dimension mismatch");
  }
  if (samples < 2) throw std::invalid_argument("twirl: too few samples");
  double acc = 0.0, acc2 = 0.0;
  for (int s = 0; s < samples; ++s) {
    Matrix u = synthesize_unitary(sample_tableau(n, derive_seed(seed, s)));
    const double val = reduced_square(u * h * u.adjoint(), n);
    acc += val;
    acc2 += val * val;
  }
  McEstimate est;
  est.samples = samples;
  est.mean = acc / samples;
  const double var = std::max(0.0, acc2 / samples - est.mean * est.mean);
  est.stderr_of_mean = std::sqrt(var / samples);
  return est;
}

}  // namespace gaplab
