#include "tmef/models/binary_markov.hpp"

#include <string>

#include "tmef/error.hpp"
#include "tmef/rng.hpp"

namespace tmef {

namespace {

constexpr int kMaxMomentOrder = 16;

void require_state(double y) {
  if (y != 0.0 && y != 1.0) {
    throw Error(ErrorCode::InvalidInput, "binary-markov states must be 0 or 1");
  }
}

}  // namespace

BinaryMarkov::BinaryMarkov() { domain_.bounds = {ParamBounds{0.0, 1.0, true, true}}; }

Capabilities BinaryMarkov::capabilities() const {
  Capabilities c;
  c.analytic_transform_gradient = true;
  c.max_moment_order = kMaxMomentOrder;
  c.analytic_score = true;
  return c;
}

Vector BinaryMarkov::default_theta() const { return Vector::Constant(1, 0.3); }

double BinaryMarkov::prob_one(double theta, double y_prev) {
  return (1.0 - y_prev) * theta + y_prev * (1.0 - theta);
}

KernelValue BinaryMarkov::transform_impl(KernelFamily family, double t, const Vector& theta,
                                         double y_prev) const {
  require_state(y_prev);
  const double p = prob_one(theta(0), y_prev);
  const KernelValue g0 = eval_unchecked(family, t, 0.0);
  const KernelValue g1 = eval_unchecked(family, t, 1.0);
  return {(1.0 - p) * g0.re + p * g1.re, (1.0 - p) * g0.im + p * g1.im};
}

KernelGradient BinaryMarkov::transform_grad_impl(KernelFamily family, double t, const Vector&,
                                                 double y_prev) const {
  require_state(y_prev);
  const double dp = 1.0 - 2.0 * y_prev;
  const KernelValue g0 = eval_unchecked(family, t, 0.0);
  const KernelValue g1 = eval_unchecked(family, t, 1.0);
  return {Vector::Constant(1, dp * (g1.re - g0.re)), Vector::Constant(1, dp * (g1.im - g0.im))};
}

double BinaryMarkov::moment_impl(int, const Vector& theta, double y_prev) const {
  require_state(y_prev);
  return prob_one(theta(0), y_prev);
}

Vector BinaryMarkov::moment_grad_impl(int, const Vector&, double y_prev) const {
  require_state(y_prev);
  return Vector::Constant(1, 1.0 - 2.0 * y_prev);
}

Vector BinaryMarkov::score_impl(const Vector& theta, const TimeSeries& series) const {
  const auto y = series.values();
  for (double v : y) require_state(v);
  const double s = pairwise_sum<double>(1, y.size(), [&](std::size_t j) {
    const double p = prob_one(theta(0), y[j - 1]);
    return (1.0 - 2.0 * y[j - 1]) * (y[j] / p - (1.0 - y[j]) / (1.0 - p));
  });
  return Vector::Constant(1, s);
}

Matrix BinaryMarkov::score_information_impl(const Vector& theta, const TimeSeries& series) const {
  const auto y = series.values();
  for (double v : y) require_state(v);
  const double s = pairwise_sum<double>(1, y.size(), [&](std::size_t j) {
    const double p = prob_one(theta(0), y[j - 1]);
    const double dp = 1.0 - 2.0 * y[j - 1];
    return dp * dp / (p * (1.0 - p));
  });
  return Matrix::Constant(1, 1, s);
}

std::vector<double> BinaryMarkov::simulate_impl(const SimSpec& spec) const {
  CounterRng rng(spec.seed, spec.stream);
  double y = spec.initial_state.value_or(default_initial_state(spec.theta));
  require_state(y);
  auto step = [&](double prev) {
    return rng.uniform_open() < prob_one(spec.theta(0), prev) ? 1.0 : 0.0;
  };
  for (std::size_t i = 0; i < spec.burn_in; ++i) y = step(y);
  std::vector<double> out(spec.n);
  for (auto& v : out) {
    y = step(y);
    v = y;
  }
  return out;
}

}  // namespace tmef
