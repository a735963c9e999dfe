#include "gaplab/linear_operator.hpp"

#include <algorithm>
#include <memory>
#include <numeric>

namespace gaplab {

LinearOperator LinearOperator::identity(Index dim) {
  return LinearOperator(dim, [](const Vector& x) { return x; });
}

LinearOperator LinearOperator::from_dense(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("LinearOperator::from_dense: matrix is not square");
  }
  auto m = std::make_shared<Matrix>(a);
  return LinearOperator(a.rows(), [m](const Vector& x) -> Vector { return (*m) * x; });
}

Matrix LinearOperator::to_dense(Index cap) const {
  if (dim_ > cap) {
    throw InfeasibleError("to_dense: dimension " + std::to_string(dim_) +
                          " exceeds cap " + std::to_string(cap));
  }
  Matrix out(dim_, dim_);
  Vector e = Vector::Zero(dim_);
  for (Index j = 0; j < dim_; ++j) {
    e(j) = 1.0;
    out.col(j) = apply_(e);
    e(j) = 0.0;
  }
  return out;
}

LinearOperator LinearOperator::operator*(const LinearOperator& rhs) const {
  if (dim_ != rhs.dim_) {
    throw std::invalid_argument("LinearOperator: composition dimension mismatch");
  }
  auto a = *this;
  auto b = rhs;
  return LinearOperator(dim_, [a, b](const Vector& x) { return a(b(x)); });
}

LinearOperator LinearOperator::operator+(const LinearOperator& rhs) const {
  if (dim_ != rhs.dim_) {
    throw std::invalid_argument("LinearOperator: sum dimension mismatch");
  }
  auto a = *this;
  auto b = rhs;
  return LinearOperator(dim_, [a, b](const Vector& x) -> Vector { return a(x) + b(x); });
}

LinearOperator LinearOperator::operator-(const LinearOperator& rhs) const {
  if (dim_ != rhs.dim_) {
    throw std::invalid_argument("LinearOperator: difference dimension mismatch");
  }
  auto a = *this;
  auto b = rhs;
  return LinearOperator(dim_, [a, b](const Vector& x) -> Vector { return a(x) - b(x); });
}

LinearOperator LinearOperator::scaled(Complex c) const {
  auto a = *this;
  return LinearOperator(dim_, [a, c](const Vector& x) -> Vector { return c * a(x); });
}

LinearOperator LinearOperator::pow(int k) const {
  if (k < 0) throw std::invalid_argument("LinearOperator::pow: negative power");
  auto a = *this;
  return LinearOperator(dim_, [a, k](const Vector& x) {
    Vector y = x;
    for (int i = 0; i < k; ++i) y = a(y);
    return y;
  });
}

LinearOperator operator*(Complex c, const LinearOperator& op) { return op.scaled(c); }

Index FactorLayout::total() const {
  return std::accumulate(dims.begin(), dims.end(), Index(1), std::multiplies<>());
}

Index FactorLayout::stride(int factor) const {
  Index s = 1;
  for (int f = static_cast<int>(dims.size()) - 1; f > factor; --f) s *= dims[f];
  return s;
}

LiftPlan::LiftPlan(const std::vector<int>& factors, const FactorLayout& layout) {
  const int nf = static_cast<int>(layout.dims.size());
  std::vector<bool> used(nf, false);
  for (int f : factors) {
    if (f < 0 || f >= nf) {
      throw std::invalid_argument("LiftPlan: factor index " + std::to_string(f) +
                                  " out of range");
    }
    if (used[f]) {
      throw std::invalid_argument("LiftPlan: duplicate factor index " +
                                  std::to_string(f));
    }
    used[f] = true;
  }

  total_dim = layout.total();
  sub_dim = 1;
  for (int f : factors) sub_dim *= layout.dims[f];
  rest_dim = total_dim / sub_dim;

  sub_offsets.assign(sub_dim, 0);
  for (Index k = 0; k < sub_dim; ++k) {
    Index rem = k, off = 0;
    for (int g = static_cast<int>(factors.size()) - 1; g >= 0; --g) {
      const Index d = layout.dims[factors[g]];
      off += (rem % d) * layout.stride(factors[g]);
      rem /= d;
    }
    sub_offsets[k] = off;
  }

  std::vector<int> rest;
  for (int f = 0; f < nf; ++f)
    if (!used[f]) rest.push_back(f);
  rest_offsets.assign(rest_dim, 0);
  for (Index r = 0; r < rest_dim; ++r) {
    Index rem = r, off = 0;
    for (int g = static_cast<int>(rest.size()) - 1; g >= 0; --g) {
      const Index d = layout.dims[rest[g]];
      off += (rem % d) * layout.stride(rest[g]);
      rem /= d;
    }
    rest_offsets[r] = off;
  }
}

LinearOperator lift_dense(const Matrix& local, const std::vector<int>& factors,
                          const FactorLayout& layout) {
  auto plan = std::make_shared<LiftPlan>(factors, layout);
  if (local.rows() != plan->sub_dim || local.cols() != plan->sub_dim) {
    throw std::invalid_argument("lift_dense: local dim " +
                                std::to_string(local.rows()) +
                                " does not match factor subset dim " +
                                std::to_string(plan->sub_dim));
  }
  auto a = std::make_shared<Matrix>(local);
  return LinearOperator(plan->total_dim, [plan, a](const Vector& x) {
    Vector out(plan->total_dim);
    Vector loc(plan->sub_dim);
    for (Index r = 0; r < plan->rest_dim; ++r) {
      const Index base = plan->rest_offsets[r];
      for (Index k = 0; k < plan->sub_dim; ++k)
        loc(k) = x(base + plan->sub_offsets[k]);
      Vector y = (*a) * loc;
      for (Index k = 0; k < plan->sub_dim; ++k)
        out(base + plan->sub_offsets[k]) = y(k);
    }
    return out;
  });
}

LinearOperator lift_lowrank(const Matrix& basis, const RealVector& weights,
                            const std::vector<int>& factors,
                            const FactorLayout& layout) {
  auto plan = std::make_shared<LiftPlan>(factors, layout);
  if (basis.rows() != plan->sub_dim) {
    throw std::invalid_argument("lift_lowrank: basis rows " +
                                std::to_string(basis.rows()) +
                                " do not match factor subset dim " +
                                std::to_string(plan->sub_dim));
  }
  if (weights.size() != basis.cols()) {
    throw std::invalid_argument("lift_lowrank: weight count does not match rank");
  }
  auto u = std::make_shared<Matrix>(basis);
  auto w = std::make_shared<RealVector>(weights);
  return LinearOperator(plan->total_dim, [plan, u, w](const Vector& x) {
    Vector out = Vector::Zero(plan->total_dim);
    Vector loc(plan->sub_dim);
    for (Index r = 0; r < plan->rest_dim; ++r) {
      const Index base = plan->rest_offsets[r];
      for (Index k = 0; k < plan->sub_dim; ++k)
        loc(k) = x(base + plan->sub_offsets[k]);
      Vector c = u->adjoint() * loc;
      c.array() *= w->array();
      Vector y = (*u) * c;
      for (Index k = 0; k < plan->sub_dim; ++k)
        out(base + plan->sub_offsets[k]) = y(k);
    }
    return out;
  });
}

LinearOperator lift_lowrank(const Matrix& basis, const std::vector<int>& factors,
                            const FactorLayout& layout) {
  return lift_lowrank(basis, RealVector::Ones(basis.cols()), factors, layout);
}

}  // namespace gaplab
