#ifndef SETRISK_LINALG_HPP
#define SETRISK_LINALG_HPP

#include "setrisk/scalar.hpp"

#include <optional>
#include <vector>

namespace setrisk {

// Exact Gaussian elimination for field scalars (Rational). Floating point types
// would need pivot thresholds, which these routines deliberately do not have.

template <typename Scalar>
struct RowEchelon {
  MatrixX<Scalar> reduced;    // reduced row echelon form, zero rows removed
  std::vector<Index> pivots;  // pivot column of each row
};

template <typename Derived>
RowEchelon<typename Derived::Scalar> rref(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  MatrixX<Scalar> a = input;
  std::vector<Index> pivots;
  Index row = 0;
  for (Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Index pivot = -1;
    for (Index r = row; r < a.rows(); ++r) {
      if (a(r, col) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != row) a.row(pivot).swap(a.row(row));
    const Scalar inv = Scalar(1) / a(row, col);
    for (Index c = col; c < a.cols(); ++c) a(row, c) *= inv;
    for (Index r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col) == 0) continue;
      const Scalar f = a(r, col);
      for (Index c = col; c < a.cols(); ++c) a(r, c) -= f * a(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return {a.topRows(row), std::move(pivots)};
}

template <typename Derived>
Index rank(const Eigen::MatrixBase<Derived>& a) {
  return static_cast<Index>(rref(a).pivots.size());
}

/// Basis of {x : a x = 0} as columns.
template <typename Derived>
MatrixX<typename Derived::Scalar> nullspace(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const auto echelon = rref(a);
  const Index n = a.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (Index p : echelon.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  MatrixX<Scalar> basis(n, n - static_cast<Index>(echelon.pivots.size()));
  Index k = 0;
  for (Index free = 0; free < n; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    VectorX<Scalar> v = VectorX<Scalar>::Zero(n);
    v[free] = 1;
    for (std::size_t r = 0; r < echelon.pivots.size(); ++r)
      v[echelon.pivots[r]] = -echelon.reduced(static_cast<Index>(r), free);
    basis.col(k++) = v;
  }
  return basis;
}

/// Some solution of a x = b, or nullopt when inconsistent.
template <typename DerivedA, typename DerivedB>
std::optional<VectorX<typename DerivedA::Scalar>> solve_linear(const Eigen::MatrixBase<DerivedA>& a,
                                                               const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  MatrixX<Scalar> aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  const auto echelon = rref(aug);
  VectorX<Scalar> x = VectorX<Scalar>::Zero(a.cols());
  for (std::size_t r = 0; r < echelon.pivots.size(); ++r) {
    const Index p = echelon.pivots[r];
    if (p == a.cols()) return std::nullopt;
    x[p] = echelon.reduced(static_cast<Index>(r), a.cols());
  }
  return x;
}

/// Reduces v against the rows of a reduced echelon basis so that v vanishes on every pivot column.
/// The result is the unique representative of v modulo the row space.
template <typename Scalar>
VectorX<Scalar> reduce_modulo(VectorX<Scalar> v, const RowEchelon<Scalar>& basis) {
  for (std::size_t r = 0; r < basis.pivots.size(); ++r) {
    const Index p = basis.pivots[r];
    if (v[p] == 0) continue;
    const Scalar f = v[p];
    for (Index c = 0; c < v.size(); ++c) v[c] -= f * basis.reduced(static_cast<Index>(r), c);
  }
  return v;
}

/// Stacks row vectors into a matrix with the given column count.
template <typename Scalar>
MatrixX<Scalar> stack_rows(const std::vector<VectorX<Scalar>>& rows, Index cols) {
  MatrixX<Scalar> m(static_cast<Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Index>(i)) = rows[i].transpose();
  return m;
}

}  // namespace setrisk

#endif  // SETRISK_LINALG_HPP
