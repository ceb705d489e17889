#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tmef/linalg.hpp"
#include "tmef/models.hpp"

namespace tmef {

using EstimatingFunction = std::function<Vector(const Vector&)>;

enum class SolveStatus { Converged, NonConvergence, SingularJacobian, InvalidStart };

std::string_view to_string(SolveStatus status);

struct SolveOptions {
  double rel_tol = 1e-8;  ///< stop when |G|_inf < rel_tol * (1 + |G(theta0)|_inf)
  int max_iterations = 200;
  double max_condition = 1e12;
  std::optional<ParamDomain> domain;
  /// Scalar bracket scan: first step (0 = 1e-3 * max(1, |theta0|)) and the
  /// distance from theta0 past which the scan stops (0 = 10 * max(1, |theta0|)).
  double scan_step = 0.0;
  double scan_radius = 0.0;
};

/// Failures are reported through `status`; the best iterate found is
/// always returned in `theta`.
struct SolveReport {
  Vector theta;
  double residual_norm = 0.0;  ///< infinity norm at theta
  int iterations = 0;
  bool converged = false;
  double jacobian_condition = 0.0;
  SolveStatus status = SolveStatus::NonConvergence;
  bool multiple_roots = false;  ///< scalar scan saw more than one sign change
};

/// Scalar problems: bracket scan outward from theta0 with doubling steps,
/// the sign change nearest theta0, then Newton steps safeguarded by
/// bisection. Vector problems: damped Newton with a forward-difference
/// Jacobian, step halving on the residual norm and projection onto the
/// domain. A throwing or non-finite evaluation counts as an invalid point.
SolveReport solve(const EstimatingFunction& g, const Vector& theta0, const SolveOptions& options = {});

/// Forward differences with step cbrt(eps) * max(1, |theta_i|), taken
/// backwards when the forward point leaves `domain`.
Matrix forward_difference_jacobian(const EstimatingFunction& g, const Vector& theta, const Vector& g0,
                                   const ParamDomain* domain = nullptr);

/// Conditional least squares: minimizes sum (y_j - E(Y_j | y_{j-1}))^2 over
/// the parameters not fixed in `fixed` (empty: all free). DegenerateSystem
/// when the gradient of the conditional mean has numerical rank below the
/// number of free parameters (relative singular value cutoff 1e-10).
Vector cls_estimate(const ProcessModel& model, const TimeSeries& series,
                    const std::vector<std::optional<double>>& fixed = {});

/// Starting value for the two-step scheme: least squares for the Gaussian
/// and binary models, a two-regression moment fit for GAR(1), and the
/// single-point CF quasi-score at a small t for stable AR(1).
Vector preliminary_estimate(const ProcessModel& model, const TimeSeries& series);

}  // namespace tmef
