#include "tmef/gar1_systems.hpp"

#include "tmef/error.hpp"
#include "tmef/simd/lag_moments.hpp"

namespace tmef {

namespace {

void require_three(const Vector& theta) {
  if (theta.size() != 3) throw Error(ErrorCode::InvalidParams, "gar1 systems need (lambda, alpha, nu)");
}

template <class Sums>
Vector polynomials_from_sums(const Vector& theta, const Sums& s) {
  const double l = theta(0), a = theta(1), v = theta(2);
  const double l2 = l * l, l3 = l2 * l, l4 = l3 * l;
  const double a2 = a * a;
  const double v2 = v * v, v3 = v2 * v, v4 = v3 * v;

  Vector out(3);
  out(0) = 5 * l3 * s(4, 0) - 6 * a * l2 * s(3, 1) + (10 * v + 4) * l2 * s(3, 0) +
           a2 * l * s(2, 2) - 6 * (1 + v) * a * l * s(2, 1) + 6 * (v + v2) * l * s(2, 0) -
           (v + v2) * a * s(1, 1) + (v2 + v3) * s(1, 0);
  out(1) = -3 * l4 * s(4, 0) + 2 * a * l3 * s(3, 1) + (-10 * v - 2) * l3 * s(3, 0) +
           a2 * l2 * s(2, 2) + 6 * v * a * l2 * s(2, 1) + (-6 * v - 12 * v2) * l2 * s(2, 0) +
           5 * a * v * (1 + v) * l * s(1, 1) - 6 * v2 * (1 + v) * l * s(1, 0) +
           (v2 + v3) * a * s(0, 1) + (-v3 - v4) * s(0, 0);
  out(2) = 6 * l3 * s(3, 0) - 8 * a * l2 * s(2, 1) + (12.5 * v + 5) * l2 * s(2, 0) +
           2 * a2 * l * s(1, 2) - 9 * (1 + v) * a * l * s(1, 1) + (8 * v + 8 * v2) * l * s(1, 0) +
           0.5 * v * a2 * s(0, 2) - 2 * v * (1 + v) * a * s(0, 1) + 1.5 * v2 * (1 + v) * s(0, 0);
  return out;
}

}  // namespace

Vector gar1_polynomial_system(const Vector& theta, const TimeSeries& series) {
  require_three(theta);
  return polynomials_from_sums(theta, simd::lag_power_sums(series.values()));
}

Vector gar1_polynomial_step(const Vector& theta, double y_prev, double y_j) {
  require_three(theta);
  auto s = [&](int a, int b) {
    double v = 1.0;
    for (int i = 0; i < a; ++i) v *= y_prev;
    for (int i = 0; i < b; ++i) v *= y_j;
    return v;
  };
  return polynomials_from_sums(theta, s);
}

Vector gar1_cls_equations(const Vector& theta, const TimeSeries& series) {
  require_three(theta);
  const double l = theta(0), a = theta(1), v = theta(2);
  const simd::LagPowerSums s = simd::lag_power_sums(series.values());
  // sum x e = a S11 - l S20 - v S10; sum e = a S01 - l S10 - v S00
  const double eq1 = a * s(1, 1) - l * s(2, 0) - v * s(1, 0);
  const double eq3 = a * s(0, 1) - l * s(1, 0) - v * s(0, 0);
  // Evaluated step by step rather than from the sums above, so the linear
  // dependence is a property of the data, not of the algebra.
  const auto y = series.values();
  const double eq2 = pairwise_sum<double>(1, y.size(), [&](std::size_t j) {
    return (l * y[j - 1] + v) * (a * y[j] - l * y[j - 1] - v);
  });
  return Vector{{eq1, eq2, eq3}};
}

}  // namespace tmef
