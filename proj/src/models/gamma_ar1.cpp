#include "tmef/models/gamma_ar1.hpp"

#include <cmath>
#include <random>
#include <string>

#include "tmef/error.hpp"
#include "tmef/rng.hpp"

namespace tmef {

namespace {

using cd = std::complex<double>;

constexpr int kMaxMomentOrder = 16;

cd laplace_argument(KernelFamily family, double t) {
  switch (family) {
    case KernelFamily::Laplace: return {t, 0.0};
    case KernelFamily::Mgf: return {-t, 0.0};
    case KernelFamily::CfReal: return {0.0, -t};
    case KernelFamily::Pgf:
      if (!(t > 0.0)) {
        throw Error(ErrorCode::TransformDiverges, "gar1: pgf needs a positive index");
      }
      return {-std::log(t), 0.0};
    case KernelFamily::Moment: break;
  }
  throw Error(ErrorCode::UnsupportedKernel, "gar1: moment kernels go through cumulants");
}

KernelValue as_kernel_value(KernelFamily family, cd v) {
  // The CF pair is (E cos tY, E sin tY) = (Re, Im) of E exp(itY).
  if (family == KernelFamily::CfReal) return {v.real(), v.imag()};
  return {v.real(), 0.0};
}

// d log L / d(lambda, alpha, nu) at complex s.
std::array<cd, 3> log_laplace_grad(cd s, const Vector& theta, double y) {
  const double lambda = theta(0), alpha = theta(1), nu = theta(2);
  const cd a_s = alpha + s;
  return {-s * y / a_s, nu * (1.0 / alpha - 1.0 / a_s) + lambda * s * y / (a_s * a_s),
          std::log(alpha) - std::log(a_s)};
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

GammaAR1::GammaAR1() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  domain_.bounds = {ParamBounds{0.0, inf, false, true}, ParamBounds{0.0, inf, true, true},
                    ParamBounds{0.0, inf, true, true}};
}

Capabilities GammaAR1::capabilities() const {
  Capabilities c;
  c.analytic_transform_gradient = true;
  c.max_moment_order = kMaxMomentOrder;
  return c;
}

Vector GammaAR1::default_theta() const { return Vector{{1.0, 2.0, 3.0}}; }

cd GammaAR1::laplace(cd s, const Vector& theta, double y_prev) {
  const double lambda = theta(0), alpha = theta(1), nu = theta(2);
  const cd a_s = alpha + s;
  if (!(a_s.real() > 0.0)) {
    throw Error(ErrorCode::TransformDiverges, "gar1: transform argument outside Re(s) > -alpha");
  }
  return std::exp(nu * (std::log(alpha) - std::log(a_s)) - lambda * s * y_prev / a_s);
}

double GammaAR1::cumulant(int r, const Vector& theta, double y_prev) {
  const double lambda = theta(0), alpha = theta(1), nu = theta(2);
  return factorial(r - 1) * (nu + r * lambda * y_prev) / std::pow(alpha, r);
}

KernelValue GammaAR1::transform_impl(KernelFamily family, double t, const Vector& theta,
                                     double y_prev) const {
  return as_kernel_value(family, laplace(laplace_argument(family, t), theta, y_prev));
}

KernelGradient GammaAR1::transform_grad_impl(KernelFamily family, double t, const Vector& theta,
                                             double y_prev) const {
  const cd s = laplace_argument(family, t);
  const cd value = laplace(s, theta, y_prev);
  const auto dlog = log_laplace_grad(s, theta, y_prev);
  KernelGradient g{Vector(3), Vector(3)};
  for (int i = 0; i < 3; ++i) {
    const KernelValue d = as_kernel_value(family, value * dlog[i]);
    g.re(i) = d.re;
    g.im(i) = d.im;
  }
  return g;
}

// Raw moments from cumulants: m_r = sum_{i=1..r} C(r-1, i-1) kappa_i m_{r-i}.
double GammaAR1::moment_impl(int r, const Vector& theta, double y_prev) const {
  std::vector<double> m(r + 1, 0.0);
  m[0] = 1.0;
  for (int k = 1; k <= r; ++k) {
    for (int i = 1; i <= k; ++i) m[k] += binomial(k - 1, i - 1) * cumulant(i, theta, y_prev) * m[k - i];
  }
  return m[r];
}

Vector GammaAR1::moment_grad_impl(int r, const Vector& theta, double y_prev) const {
  const double alpha = theta(1);
  std::vector<double> m(r + 1, 0.0);
  std::vector<Vector> dm(r + 1, Vector::Zero(3));
  m[0] = 1.0;
  for (int k = 1; k <= r; ++k) {
    for (int i = 1; i <= k; ++i) {
      const double kappa = cumulant(i, theta, y_prev);
      const double scale = factorial(i - 1) / std::pow(alpha, i);
      const Vector dkappa{{scale * i * y_prev, -i * kappa / alpha, scale}};
      const double c = binomial(k - 1, i - 1);
      m[k] += c * kappa * m[k - i];
      dm[k] += c * (dkappa * m[k - i] + kappa * dm[k - i]);
    }
  }
  return dm[r];
}

void GammaAR1::validate_simulation(const Vector& theta) const {
  if (!(theta(0) < theta(1))) {
    throw Error(ErrorCode::InvalidParams, "gar1 simulation needs lambda < alpha (stationarity)");
  }
}

double GammaAR1::default_initial_state(const Vector& theta) const {
  return theta(2) / (theta(1) - theta(0));
}

std::vector<double> GammaAR1::simulate_impl(const SimSpec& spec) const {
  const double lambda = spec.theta(0), alpha = spec.theta(1), nu = spec.theta(2);
  CounterRng rng(spec.seed, spec.stream);
  double y = spec.initial_state.value_or(default_initial_state(spec.theta));
  if (y < 0.0) throw Error(ErrorCode::InvalidParams, "gar1 initial state must be nonnegative");
  // N exponential(rate alpha) jumps plus Gamma(nu, rate alpha) noise is a
  // single Gamma(N + nu, rate alpha) draw.
  auto step = [&](double prev) {
    const double mean = lambda * prev;
    long long jumps = 0;
    if (mean > 0.0) jumps = std::poisson_distribution<long long>(mean)(rng);
    return std::gamma_distribution<double>(static_cast<double>(jumps) + nu, 1.0 / alpha)(rng);
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
