#pragma once

#include <cstddef>
#include <utility>

#include <Eigen/Dense>

namespace tmef {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Relative eigenvalue cutoff used when pseudo-inverting conditional
/// covariance matrices.
inline constexpr double kPinvRelativeCutoff = 1e-12;

/// Moore-Penrose inverse of a symmetric matrix through its eigendecomposition.
/// Eigenvalues below `rel_cutoff * max_eigenvalue` (including negative
/// round-off) are treated as zero.
Matrix symmetric_pinv(const Matrix& a, double rel_cutoff = kPinvRelativeCutoff);

/// Number of eigenvalues above `rel_cutoff * max_eigenvalue`.
std::size_t symmetric_rank(const Matrix& a, double rel_cutoff = kPinvRelativeCutoff);

double min_eigenvalue(const Matrix& a);

/// Numerical rank from singular values with relative cutoff.
std::size_t numerical_rank(const Matrix& a, double rel_cutoff);

/// Ratio of extreme singular values; infinity for a singular matrix.
double condition_number(const Matrix& a);

/// Pairwise (cascade) summation of `term(i)` for i in [lo, hi). The split
/// points depend only on the range, so the rounding is reproducible.
template <class T, class Term>
T pairwise_sum(std::size_t lo, std::size_t hi, Term&& term) {
  constexpr std::size_t kLeaf = 8;
  if (hi - lo <= kLeaf) {
    T acc = term(lo);
    for (std::size_t i = lo + 1; i < hi; ++i) acc += term(i);
    return acc;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  T left = pairwise_sum<T>(lo, mid, term);
  left += pairwise_sum<T>(mid, hi, term);
  return left;
}

}  // namespace tmef
