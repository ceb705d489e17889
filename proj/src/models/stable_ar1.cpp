#include "tmef/models/stable_ar1.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tmef/error.hpp"
#include "tmef/rng.hpp"

namespace tmef {

namespace {

// At alpha = 2 the noise is N(0, 2) and every moment exists.
constexpr int kGaussianMomentOrder = 16;
constexpr double kGaussianNoiseVariance = 2.0;

double damping(double t, double alpha) { return std::exp(-std::pow(std::abs(t), alpha)); }

}  // namespace

StableAR1::StableAR1(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw Error(ErrorCode::InvalidParams, "stable index must lie in (0, 2]");
  }
  domain_.bounds = {ParamBounds{}};
}

Capabilities StableAR1::capabilities() const {
  Capabilities c;
  c.analytic_transform_gradient = true;
  c.max_moment_order = alpha_ == 2.0 ? kGaussianMomentOrder : 0;
  c.closed_form_quasiscore = true;
  return c;
}

Vector StableAR1::default_theta() const { return Vector::Constant(1, 0.6); }

KernelValue StableAR1::transform_impl(KernelFamily, double t, const Vector& theta,
                                      double y_prev) const {
  const double e = damping(t, alpha_);
  const double arg = t * theta(0) * y_prev;
  return {std::cos(arg) * e, std::sin(arg) * e};
}

KernelGradient StableAR1::transform_grad_impl(KernelFamily, double t, const Vector& theta,
                                              double y_prev) const {
  const double e = damping(t, alpha_);
  const double arg = t * theta(0) * y_prev;
  KernelGradient g{Vector(1), Vector(1)};
  g.re(0) = -t * y_prev * std::sin(arg) * e;
  g.im(0) = t * y_prev * std::cos(arg) * e;
  return g;
}

double StableAR1::moment_impl(int r, const Vector& theta, double y_prev) const {
  if (r == 0) return 1.0;
  const double mu = theta(0) * y_prev;
  double prev = 1.0, cur = mu;
  for (int i = 2; i <= r; ++i) {
    const double next = mu * cur + (i - 1) * kGaussianNoiseVariance * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Vector StableAR1::moment_grad_impl(int r, const Vector& theta, double y_prev) const {
  Vector g(1);
  g(0) = y_prev * r * moment_impl(r - 1, theta, y_prev);
  return g;
}

void StableAR1::validate_simulation(const Vector& theta) const {
  if (!(std::abs(theta(0)) < 1.0)) {
    throw Error(ErrorCode::InvalidParams, "stable AR(1) simulation needs |phi| < 1");
  }
}

std::vector<double> StableAR1::simulate_impl(const SimSpec& spec) const {
  CounterRng rng(spec.seed, spec.stream);
  const double phi = spec.theta(0);
  double y = spec.initial_state.value_or(default_initial_state(spec.theta));
  for (std::size_t i = 0; i < spec.burn_in; ++i) y = phi * y + stable_variate(alpha_, rng);
  std::vector<double> out(spec.n);
  for (auto& v : out) {
    y = phi * y + stable_variate(alpha_, rng);
    v = y;
  }
  return out;
}

double stable_variate(double alpha, CounterRng& rng) {
  const double v = std::numbers::pi * (rng.uniform_open() - 0.5);
  const double w = -std::log(rng.uniform_open());
  if (alpha == 1.0) return std::tan(v);
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos(v - alpha * v) / w, (1.0 - alpha) / alpha);
}

double stable_information_factor(double t, double alpha) {
  if (!(t > 0.0) || !(alpha > 0.0 && alpha <= 2.0)) {
    throw Error(ErrorCode::InvalidParams, "information factor needs t > 0 and alpha in (0, 2]");
  }
  const double tau = std::pow(t, alpha);
  return 2.0 * t * t * std::exp(-2.0 * tau) / -std::expm1(-std::pow(2.0, alpha) * tau);
}

StableOptimum stable_optimal_point(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw Error(ErrorCode::InvalidParams, "stable index must lie in (0, 2]");
  }
  if (alpha == 2.0) return {0.0, 0.5, true};
  // Unimodal in t for alpha < 2; a coarse scan locates the bracket.
  constexpr int kGrid = 500;
  constexpr double kLo = 1e-3, kHi = 5.0;
  int best = 0;
  double best_value = -1.0;
  for (int i = 0; i < kGrid; ++i) {
    const double t = kLo + (kHi - kLo) * i / (kGrid - 1);
    const double v = stable_information_factor(t, alpha);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  if (best == 0) return {kLo, best_value, true};
  const double step = (kHi - kLo) / (kGrid - 1);
  double a = kLo + step * (best - 1), b = kLo + step * std::min(best + 1, kGrid - 1);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = stable_information_factor(c, alpha), fd = stable_information_factor(d, alpha);
  while (b - a > 1e-12) {
    if (fd > fc) {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = stable_information_factor(d, alpha);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = stable_information_factor(c, alpha);
    }
  }
  const double t = 0.5 * (a + b);
  return {t, stable_information_factor(t, alpha), false};
}

std::optional<double> stable_iid_fisher_information(double alpha) {
  struct Entry {
    double alpha, fisher;
  };
  static constexpr Entry kTable[] = {{2.0, 0.500}, {1.9, 0.473}, {1.7, 0.442}, {1.5, 0.428},
                                     {1.3, 0.431}, {1.1, 0.463}, {1.0, 0.500}, {0.8, 0.678}};
  for (const auto& e : kTable) {
    if (std::abs(e.alpha - alpha) < 1e-12) return e.fisher;
  }
  return std::nullopt;
}

double stable_closed_form_quasiscore(double phi, double alpha, double t, const TimeSeries& series) {
  if (!(t > 0.0) || !(alpha > 0.0 && alpha <= 2.0)) {
    throw Error(ErrorCode::InvalidParams, "closed-form quasi-score needs t > 0 and alpha in (0, 2]");
  }
  const double tau = std::pow(t, alpha);
  const double prefactor = 2.0 * t * std::exp(-tau) / -std::expm1(-std::pow(2.0, alpha) * tau);
  const auto y = series.values();
  const double s = pairwise_sum<double>(1, y.size(), [&](std::size_t j) {
    return y[j - 1] * std::sin(t * (y[j] - phi * y[j - 1]));
  });
  return prefactor * s;
}

}  // namespace tmef
