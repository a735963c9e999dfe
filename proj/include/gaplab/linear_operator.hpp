#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gaplab/dense.hpp"

namespace gaplab {

// Matrix-free linear map on C^dim.  Used wherever the ambient dimension is
// too large to materialize, with to_dense() as the small-dimension escape
// hatch for cross-checks.
class LinearOperator {
 public:
  using ApplyFn = std::function<Vector(const Vector&)>;

  LinearOperator() : dim_(0) {}
  LinearOperator(Index dim, ApplyFn apply) : dim_(dim), apply_(std::move(apply)) {}

  Index dim() const { return dim_; }

  Vector operator()(const Vector& x) const {
    if (x.size() != dim_) {
      throw std::invalid_argument("LinearOperator: input length " +
                                  std::to_string(x.size()) + " != dim " +
                                  std::to_string(dim_));
    }
    return apply_(x);
  }

  static LinearOperator identity(Index dim);
  static LinearOperator from_dense(const Matrix& a);

  // Materializes the operator column by column.  Throws InfeasibleError
  // above the cap; callers that expect large dimensions must stay matrix
  // free.
  Matrix to_dense(Index cap = Index(1) << 13) const;

  LinearOperator operator*(const LinearOperator& rhs) const;  // composition
  LinearOperator operator+(const LinearOperator& rhs) const;
  LinearOperator operator-(const LinearOperator& rhs) const;
  LinearOperator scaled(Complex c) const;
  LinearOperator pow(int k) const;

 private:
  Index dim_;
  ApplyFn apply_;
};

LinearOperator operator*(Complex c, const LinearOperator& op);

// Tensor-factor layout with factor 0 as the most significant index, matching
// the kron() ordering in dense.hpp.
struct FactorLayout {
  std::vector<Index> dims;

  Index total() const;
  Index stride(int factor) const;
};

// Precomputed index tables for applying an operator on an ordered subset of
// tensor factors.  sub_offsets enumerates the subset in the order given
// (first listed factor is the most significant local digit); rest_offsets
// enumerates every assignment of the remaining factors.  A global index is
// always sub_offsets[k] + rest_offsets[r] for exactly one (k, r).
struct LiftPlan {
  Index total_dim = 0;
  Index sub_dim = 0;
  Index rest_dim = 0;
  std::vector<Index> sub_offsets;
  std::vector<Index> rest_offsets;

  LiftPlan(const std::vector<int>& factors, const FactorLayout& layout);
};

// Embeds a dense operator acting on the listed factors into the full space.
LinearOperator lift_dense(const Matrix& local, const std::vector<int>& factors,
                          const FactorLayout& layout);

// Embeds a Hermitian low-rank operator  basis * diag(weights) * basis^dagger
// acting on the listed factors.  basis columns must be orthonormal; weights
// defaults to all ones (an orthogonal projector).  Cost per application is
// O(rank * total_dim) instead of O(sub_dim * total_dim).
LinearOperator lift_lowrank(const Matrix& basis, const RealVector& weights,
                            const std::vector<int>& factors,
                            const FactorLayout& layout);
LinearOperator lift_lowrank(const Matrix& basis, const std::vector<int>& factors,
                            const FactorLayout& layout);

}  // namespace gaplab
