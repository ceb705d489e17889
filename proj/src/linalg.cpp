#include "tmef/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tmef {

namespace {

Eigen::SelfAdjointEigenSolver<Matrix> eigen_of(const Matrix& a) {
  const Matrix sym = 0.5 * (a + a.transpose());
  return Eigen::SelfAdjointEigenSolver<Matrix>(sym);
}

}  // namespace

Matrix symmetric_pinv(const Matrix& a, double rel_cutoff) {
  const auto n = a.rows();
  if (n == 1) {
    const double v = a(0, 0);
    Matrix out(1, 1);
    out(0, 0) = v > 0.0 ? 1.0 / v : 0.0;
    return out;
  }
  const auto es = eigen_of(a);
  const Vector& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  Matrix out = Matrix::Zero(n, n);
  if (!(top > 0.0)) return out;
  const double cut = rel_cutoff * top;
  const Matrix& q = es.eigenvectors();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ev(i) > cut) out.noalias() += (1.0 / ev(i)) * q.col(i) * q.col(i).transpose();
  }
  return out;
}

std::size_t symmetric_rank(const Matrix& a, double rel_cutoff) {
  const auto es = eigen_of(a);
  const Vector& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  if (!(top > 0.0)) return 0;
  return static_cast<std::size_t>((ev.array() > rel_cutoff * top).count());
}

double min_eigenvalue(const Matrix& a) { return eigen_of(a).eigenvalues().minCoeff(); }

std::size_t numerical_rank(const Matrix& a, double rel_cutoff) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0.0)) return 0;
  return static_cast<std::size_t>((sv.array() > rel_cutoff * sv(0)).count());
}

double condition_number(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sv = svd.singularValues();
  const double lo = sv(sv.size() - 1);
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return sv(0) / lo;
}

}  // namespace tmef
