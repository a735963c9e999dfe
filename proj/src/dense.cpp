#include "gaplab/dense.hpp"

#include <Eigen/SVD>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>

#include "gaplab/rng.hpp"

namespace gaplab {

double hermiticity_defect(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("hermiticity_defect: matrix is not square");
  }
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& a, double tol) {
  return hermiticity_defect(a) <= tol;
}

Vector vectorize(const Matrix& a) {
  const Index r = a.rows(), c = a.cols();
  Vector v(r * c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) v(i * c + j) = a(i, j);
  return v;
}

Matrix devectorize(const Vector& v) {
  const auto n = static_cast<Index>(std::llround(std::sqrt(double(v.size()))));
  if (n * n != v.size()) {
    throw std::invalid_argument("devectorize: length " +
                                std::to_string(v.size()) +
                                " is not a perfect square");
  }
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = v(i * n + j);
  return a;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix kron_pow(const Matrix& a, int k) {
  if (k < 0) throw std::invalid_argument("kron_pow: negative power");
  Matrix out = Matrix::Identity(1, 1);
  for (int i = 0; i < k; ++i) out = kron(out, a);
  return out;
}

namespace {

std::vector<Index> strides_of(const std::vector<Index>& dims) {
  std::vector<Index> s(dims.size());
  Index acc = 1;
  for (int f = static_cast<int>(dims.size()) - 1; f >= 0; --f) {
    s[f] = acc;
    acc *= dims[f];
  }
  return s;
}

}  // namespace

Matrix partial_trace(const Matrix& a, const std::vector<int>& keep,
                     const std::vector<Index>& dims) {
  const Index total =
      std::accumulate(dims.begin(), dims.end(), Index(1), std::multiplies<>());
  if (a.rows() != total || a.cols() != total) {
    throw std::invalid_argument(
        "partial_trace: matrix dim " + std::to_string(a.rows()) +
        " does not match factor dims product " + std::to_string(total));
  }
  for (size_t i = 0; i + 1 < keep.size(); ++i) {
    if (keep[i] >= keep[i + 1]) {
      throw std::invalid_argument("partial_trace: keep list must be strictly increasing");
    }
  }
  for (int f : keep) {
    if (f < 0 || f >= static_cast<int>(dims.size())) {
      throw std::invalid_argument("partial_trace: keep index " +
                                  std::to_string(f) + " out of range");
    }
  }

  std::vector<int> traced;
  for (int f = 0; f < static_cast<int>(dims.size()); ++f) {
    if (std::find(keep.begin(), keep.end(), f) == keep.end()) traced.push_back(f);
  }
  const auto strides = strides_of(dims);

  Index keep_dim = 1, trace_dim = 1;
  for (int f : keep) keep_dim *= dims[f];
  for (int f : traced) trace_dim *= dims[f];

  // offset tables for the kept and traced factor groups
  auto offsets = [&](const std::vector<int>& group, Index group_dim) {
    std::vector<Index> off(group_dim, 0);
    for (Index idx = 0; idx < group_dim; ++idx) {
      Index rem = idx, o = 0;
      for (int g = static_cast<int>(group.size()) - 1; g >= 0; --g) {
        const Index d = dims[group[g]];
        o += (rem % d) * strides[group[g]];
        rem /= d;
      }
      off[idx] = o;
    }
    return off;
  };
  const auto koff = offsets(keep, keep_dim);
  const auto toff = offsets(traced, trace_dim);

  Matrix out = Matrix::Zero(keep_dim, keep_dim);
  for (Index i = 0; i < keep_dim; ++i)
    for (Index j = 0; j < keep_dim; ++j) {
      Complex acc = 0.0;
      for (Index s = 0; s < trace_dim; ++s)
        acc += a(koff[i] + toff[s], koff[j] + toff[s]);
      out(i, j) = acc;
    }
  return out;
}

double schatten_norm(const Matrix& a, Schatten p) {
  if (p == Schatten::Two) return a.norm();
  Eigen::JacobiSVD<Matrix> svd;
  svd.compute(a);
  const RealVector sv = svd.singularValues();
  if (p == Schatten::One) return sv.sum();
  return sv.size() ? sv(0) : 0.0;
}

double operator_norm(const Matrix& a) { return schatten_norm(a, Schatten::Inf); }

Matrix polar_unitary(const Matrix& a, PolarInfo* info, double rank_tol) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("polar_unitary: matrix is not square");
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
  if (info) {
    info->smallest_sv = smin;
    info->rank_deficient = (smin <= rank_tol * std::max(1.0, smax));
  }
  return svd.matrixU() * svd.matrixV().adjoint();
}

PsdReport psd_check(const Matrix& a, double tol) {
  PsdReport rep;
  rep.herm_defect = hermiticity_defect(a);
  if (rep.herm_defect > std::max(tol, 1e-9)) {
    throw std::invalid_argument("psd_check: hermiticity defect " +
                                std::to_string(rep.herm_defect) +
                                " exceeds tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw SolverError("psd_check: eigensolver failed to converge");
  }
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  rep.psd = rep.min_eigenvalue >= -tol;
  return rep;
}

Matrix choi_from_superop(const Matrix& m) {
  const auto d = static_cast<Index>(std::llround(std::sqrt(double(m.rows()))));
  if (d * d != m.rows() || m.rows() != m.cols()) {
    throw std::invalid_argument("choi_from_superop: dimension is not d^2 x d^2");
  }
  Matrix c(d * d, d * d);
  for (Index k = 0; k < d; ++k)
    for (Index i = 0; i < d; ++i)
      for (Index l = 0; l < d; ++l)
        for (Index j = 0; j < d; ++j)
          c(k * d + i, l * d + j) = m(k * d + l, i * d + j);
  return c;
}

RealVector hermitian_eigenvalues(const Matrix& a, double herm_tol) {
  const double defect = hermiticity_defect(a);
  if (defect > herm_tol) {
    throw std::invalid_argument("hermitian_eigenvalues: defect " +
                                std::to_string(defect) + " exceeds " +
                                std::to_string(herm_tol));
  }
  const double imag_size =
      a.size() == 0 ? 0.0 : a.imag().cwiseAbs().maxCoeff();
  if (imag_size < 1e-13) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(a.real(),
                                                 Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
      throw SolverError("hermitian_eigenvalues: eigensolver failed");
    }
    return es.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw SolverError("hermitian_eigenvalues: eigensolver failed");
  }
  return es.eigenvalues();
}

Matrix random_gaussian_matrix(Index rows, Index cols, std::uint64_t seed) {
  auto g = make_engine(seed);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = Complex(gaussian(g), gaussian(g));
  return m;
}

Vector random_gaussian_vector(Index n, std::uint64_t seed) {
  auto g = make_engine(seed);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(gaussian(g), gaussian(g));
  return v;
}

Matrix random_hermitian(Index d, std::uint64_t seed, bool traceless,
                        bool unit_frobenius) {
  Matrix a = random_gaussian_matrix(d, d, seed);
  Matrix h = 0.5 * (a + a.adjoint());
  if (traceless) h -= (h.trace() / double(d)) * Matrix::Identity(d, d);
  if (unit_frobenius) {
    const double nf = h.norm();
    if (nf < 1e-14) throw SolverError("random_hermitian: degenerate draw");
    h /= nf;
  }
  return h;
}

}  // namespace gaplab
