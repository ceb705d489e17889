#include "tmef/models/gaussian_ar1.hpp"

#include <cmath>
#include <random>

#include "tmef/error.hpp"
#include "tmef/rng.hpp"

namespace tmef {

namespace {

constexpr int kMaxMomentOrder = 16;

// E(mu + sigma Z)^r by m_r = mu m_{r-1} + (r-1) sigma^2 m_{r-2}.
double normal_moment(int r, double mu, double var) {
  if (r == 0) return 1.0;
  double prev = 1.0, cur = mu;
  for (int i = 2; i <= r; ++i) {
    const double next = mu * cur + (i - 1) * var * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

GaussianAR1::GaussianAR1(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::InvalidParams, "gaussian AR(1) needs sigma > 0");
  }
  domain_.bounds = {ParamBounds{}};
}

Capabilities GaussianAR1::capabilities() const {
  Capabilities c;
  c.analytic_transform_gradient = true;
  c.max_moment_order = kMaxMomentOrder;
  c.analytic_score = true;
  return c;
}

Vector GaussianAR1::default_theta() const { return Vector::Constant(1, 0.5); }

KernelValue GaussianAR1::transform_impl(KernelFamily family, double t, const Vector& theta,
                                        double y_prev) const {
  const double mu = theta(0) * y_prev;
  const double half_var = 0.5 * sigma_ * sigma_ * t * t;
  switch (family) {
    case KernelFamily::Mgf: return {std::exp(mu * t + half_var), 0.0};
    case KernelFamily::Laplace: return {std::exp(-mu * t + half_var), 0.0};
    case KernelFamily::CfReal: {
      const double e = std::exp(-half_var);
      return {std::cos(mu * t) * e, std::sin(mu * t) * e};
    }
    default: break;
  }
  throw Error(ErrorCode::UnsupportedKernel, "gaussian-ar1: unsupported kernel");
}

KernelGradient GaussianAR1::transform_grad_impl(KernelFamily family, double t, const Vector& theta,
                                                double y_prev) const {
  const KernelValue c = transform_impl(family, t, theta, y_prev);
  KernelGradient g{Vector::Zero(1), Vector::Zero(1)};
  switch (family) {
    case KernelFamily::Mgf: g.re(0) = y_prev * t * c.re; break;
    case KernelFamily::Laplace: g.re(0) = -y_prev * t * c.re; break;
    case KernelFamily::CfReal:
      // d/dmu (cos, sin)(mu t) e = t (-sin, cos)(mu t) e
      g.re(0) = -y_prev * t * c.im;
      g.im(0) = y_prev * t * c.re;
      break;
    default: break;
  }
  return g;
}

double GaussianAR1::moment_impl(int r, const Vector& theta, double y_prev) const {
  return normal_moment(r, theta(0) * y_prev, sigma_ * sigma_);
}

Vector GaussianAR1::moment_grad_impl(int r, const Vector& theta, double y_prev) const {
  return Vector::Constant(1, y_prev * r * normal_moment(r - 1, theta(0) * y_prev, sigma_ * sigma_));
}

Vector GaussianAR1::score_impl(const Vector& theta, const TimeSeries& series) const {
  const auto y = series.values();
  const double phi = theta(0);
  const double s = pairwise_sum<double>(
      1, y.size(), [&](std::size_t j) { return y[j - 1] * (y[j] - phi * y[j - 1]); });
  return Vector::Constant(1, s / (sigma_ * sigma_));
}

Matrix GaussianAR1::score_information_impl(const Vector&, const TimeSeries& series) const {
  const auto y = series.values();
  const double s = pairwise_sum<double>(1, y.size(), [&](std::size_t j) { return y[j - 1] * y[j - 1]; });
  return Matrix::Constant(1, 1, s / (sigma_ * sigma_));
}

void GaussianAR1::validate_simulation(const Vector& theta) const {
  if (!(std::abs(theta(0)) < 1.0)) {
    throw Error(ErrorCode::InvalidParams, "gaussian AR(1) simulation needs |phi| < 1");
  }
}

std::vector<double> GaussianAR1::simulate_impl(const SimSpec& spec) const {
  CounterRng rng(spec.seed, spec.stream);
  std::normal_distribution<double> noise(0.0, sigma_);
  const double phi = spec.theta(0);
  double y = spec.initial_state.value_or(default_initial_state(spec.theta));
  for (std::size_t i = 0; i < spec.burn_in; ++i) y = phi * y + noise(rng);
  std::vector<double> out(spec.n);
  for (auto& v : out) {
    y = phi * y + noise(rng);
    v = y;
  }
  return out;
}

}  // namespace tmef
