#pragma once

#include <cstddef>
#include <vector>

#include "tmef/kernels.hpp"
#include "tmef/linalg.hpp"
#include "tmef/models.hpp"

namespace tmef {

/// Minimum separation between two points of a PointSet.
inline constexpr double kMinPointSeparation = 1e-6;

/// A kernel family with ordered, distinct, admissible evaluation points.
class PointSet {
 public:
  PointSet(KernelFamily family, std::vector<double> points);

  KernelFamily family() const noexcept { return family_; }
  const std::vector<double>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  /// Real components of the kernel vector: 2k for CfReal, k otherwise.
  std::size_t components() const noexcept {
    return points_.size() * static_cast<std::size_t>(components_per_point(family_));
  }

  /// False when `t` is inadmissible or within kMinPointSeparation of a point.
  bool accepts(double t) const;
  PointSet with_point(double t) const;

 private:
  KernelFamily family_;
  std::vector<double> points_;
};

/// Conditional quantities of one step j given y_{j-1}. CfReal components
/// are ordered (cos t_1 .. cos t_k, sin t_1 .. sin t_k).
struct StepQuantities {
  Vector h;     ///< g_t(y_j) - c_j(t)
  Matrix grad;  ///< E(dh/dtheta | past) = -dc/dtheta, k' x p
  Matrix cov;   ///< E(h h' | past), k' x k'
};

/// g_t(y_j) - c_j(t) for a single point; one component, two for CfReal.
Vector martingale_difference(const ProcessModel& model, KernelFamily family, double t,
                             const Vector& theta, double y_prev, double y_j);

/// Covariances come from the closure rule, so only transform values are
/// needed. A closure index outside the transform's existence region raises
/// NotClosed.
StepQuantities step_quantities(const ProcessModel& model, const PointSet& points,
                               const Vector& theta, double y_prev, double y_j);

/// w* = (-grad)' pinv(cov), p x k'. The sign makes the quasi-score the
/// projection of the score. DegenerateCovariance when cov is identically 0.
Matrix optimal_weights(const StepQuantities& sq);

class InfoMatrix {
 public:
  InfoMatrix() = default;
  explicit InfoMatrix(Matrix value);

  const Matrix& value() const noexcept { return value_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(value_.rows()); }
  std::size_t effective_rank() const;
  /// Exactly 0 below full numerical rank.
  double det() const;
  /// The selection objective: the scalar for p = 1, the determinant otherwise.
  double objective() const;

 private:
  Matrix value_;
};

/// Sum over j = 2..n of w_j* h_j.
Vector quasi_score(const ProcessModel& model, const PointSet& points, const Vector& theta,
                   const TimeSeries& series);

/// Sum over j = 2..n of grad' pinv(cov) grad.
InfoMatrix information_matrix(const ProcessModel& model, const PointSet& points,
                              const Vector& theta, const TimeSeries& series);

struct QuasiScoreEvaluation {
  Vector score;
  InfoMatrix info;
};

/// quasi_score and information_matrix from one pass over the series.
QuasiScoreEvaluation evaluate_quasi_score(const ProcessModel& model, const PointSet& points,
                                          const Vector& theta, const TimeSeries& series);

/// a / b for p = 1, det(a) / det(b) otherwise. SingularReference when b is.
double efficiency(const InfoMatrix& a, const InfoMatrix& b);

/// Small-t expansion terms of the single-point MGF quasi-score around the
/// first-moment quasi-score, for the parameter `param_index`:
/// G*(t) = G*(1) + t sum K_j + o(t) and I(t) = I(1) + t sum L_j + o(t).
struct ExpansionTerms {
  double sum_k = 0.0;
  double sum_l = 0.0;
};

ExpansionTerms expansion_terms(const ProcessModel& model, const Vector& theta,
                               const TimeSeries& series, std::size_t param_index = 0);

/// dE(Y^2)/dtheta Var - dE(Y)/dtheta Cov(Y, Y^2), all conditional on y_prev.
/// Zero exactly when a single small-t transform point adds nothing to the
/// first-moment quasi-score at this step.
double moment_optimality_condition(const ProcessModel& model, const Vector& theta, double y_prev,
                                   std::size_t param_index = 0);

/// The same condition divided by Var:
/// dVar/dtheta - skew * dE(Y)/dtheta * sqrt(Var).
double moment_optimality_skewness_form(const ProcessModel& model, const Vector& theta,
                                       double y_prev, std::size_t param_index = 0);

/// Conditional skewness E(Y - m)^3 / Var^{3/2}.
double conditional_skewness(const ProcessModel& model, const Vector& theta, double y_prev);

}  // namespace tmef
