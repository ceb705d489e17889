#pragma once

#include "tmef/linalg.hpp"
#include "tmef/models.hpp"

namespace tmef {

/// The three polynomial estimating equations for GAR(1), theta =
/// (lambda, alpha, nu), written out in lag power sums
/// S(a, b) = sum y_{j-1}^a y_j^b. Component i is, step by step, a fixed
/// power of alpha times J' adj(cov) h from the moment kernels {1, 2}:
/// -alpha^6/2 for lambda and nu, -alpha^7/2 for alpha.
Vector gar1_polynomial_system(const Vector& theta, const TimeSeries& series);

/// The same polynomials for one step (y_prev, y_j).
Vector gar1_polynomial_step(const Vector& theta, double y_prev, double y_j);

/// Conditional least-squares normal equations for GAR(1) scaled by alpha^2,
/// with e_j = alpha y_j - lambda y_{j-1} - nu:
/// (sum y_{j-1} e_j, sum (lambda y_{j-1} + nu) e_j, sum e_j).
/// The second is lambda times the first plus nu times the third.
Vector gar1_cls_equations(const Vector& theta, const TimeSeries& series);

}  // namespace tmef
