#include <cmath>
#include <limits>
#include <string>

#include "tmef/error.hpp"
#include "tmef/models.hpp"

namespace tmef {

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw Error(ErrorCode::InvalidInput, "a time series needs n >= 2");
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "time series entries must be finite");
  }
}

bool ParamDomain::contains(const Vector& theta) const {
  if (static_cast<std::size_t>(theta.size()) != bounds.size()) return false;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const double v = theta(static_cast<Eigen::Index>(i));
    const auto& b = bounds[i];
    if (!std::isfinite(v)) return false;
    if (b.lower_open ? !(v > b.lower) : !(v >= b.lower)) return false;
    if (b.upper_open ? !(v < b.upper) : !(v <= b.upper)) return false;
  }
  return true;
}

Vector ParamDomain::project(const Vector& theta) const {
  Vector out = theta;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const auto& b = bounds[i];
    double& v = out(static_cast<Eigen::Index>(i));
    if (std::isfinite(b.lower)) {
      const double lo = b.lower_open ? b.lower + 1e-10 * std::max(1.0, std::abs(b.lower)) : b.lower;
      v = std::max(v, lo);
    }
    if (std::isfinite(b.upper)) {
      const double hi = b.upper_open ? b.upper - 1e-10 * std::max(1.0, std::abs(b.upper)) : b.upper;
      v = std::min(v, hi);
    }
  }
  return out;
}

double fd_step(double x) {
  return std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(x));
}

void ProcessModel::require_theta(const Vector& theta) const {
  if (static_cast<std::size_t>(theta.size()) != param_dim()) {
    throw Error(ErrorCode::InvalidParams, name() + ": expected " + std::to_string(param_dim()) +
                                              " parameters, got " + std::to_string(theta.size()));
  }
  if (!domain().contains(theta)) {
    throw Error(ErrorCode::InvalidParams, name() + ": parameter vector outside the domain");
  }
}

KernelValue ProcessModel::conditional_transform(KernelFamily family, double t, const Vector& theta,
                                                double y_prev) const {
  if (!supports(family)) {
    throw Error(ErrorCode::UnsupportedKernel,
                name() + " does not support the " + std::string(to_string(family)) + " kernel");
  }
  require_theta(theta);
  if (family == KernelFamily::Moment) {
    if (t < 0.0 || std::floor(t) != t) {
      throw Error(ErrorCode::IndexOutOfDomain, "moment index must be a nonnegative integer");
    }
    return {conditional_moment(static_cast<int>(t), theta, y_prev), 0.0};
  }
  const KernelValue v = transform_impl(family, t, theta, y_prev);
  if (!std::isfinite(v.re) || !std::isfinite(v.im)) {
    throw Error(ErrorCode::TransformDiverges,
                name() + ": transform is not finite at t=" + std::to_string(t));
  }
  return v;
}

KernelGradient ProcessModel::conditional_transform_grad(KernelFamily family, double t,
                                                        const Vector& theta, double y_prev) const {
  if (!supports(family)) {
    throw Error(ErrorCode::UnsupportedKernel,
                name() + " does not support the " + std::string(to_string(family)) + " kernel");
  }
  require_theta(theta);
  if (family == KernelFamily::Moment) {
    if (t < 0.0 || std::floor(t) != t) {
      throw Error(ErrorCode::IndexOutOfDomain, "moment index must be a nonnegative integer");
    }
    return {conditional_moment_grad(static_cast<int>(t), theta, y_prev),
            Vector::Zero(theta.size())};
  }
  if (capabilities().analytic_transform_gradient) {
    // Existence check shares the value path.
    (void)conditional_transform(family, t, theta, y_prev);
    return transform_grad_impl(family, t, theta, y_prev);
  }
  return transform_grad_fd(family, t, theta, y_prev);
}

KernelGradient ProcessModel::transform_grad_fd(KernelFamily family, double t, const Vector& theta,
                                               double y_prev) const {
  const auto p = theta.size();
  KernelGradient g{Vector::Zero(p), Vector::Zero(p)};
  for (Eigen::Index i = 0; i < p; ++i) {
    const double h = fd_step(theta(i));
    Vector up = theta, dn = theta;
    up(i) += h;
    dn(i) -= h;
    const KernelValue a = conditional_transform(family, t, up, y_prev);
    const KernelValue b = conditional_transform(family, t, dn, y_prev);
    g.re(i) = (a.re - b.re) / (2.0 * h);
    g.im(i) = (a.im - b.im) / (2.0 * h);
  }
  return g;
}

KernelGradient ProcessModel::transform_grad_impl(KernelFamily family, double t, const Vector& theta,
                                                 double y_prev) const {
  return transform_grad_fd(family, t, theta, y_prev);
}

double ProcessModel::conditional_moment(int r, const Vector& theta, double y_prev) const {
  require_theta(theta);
  if (r < 0) throw Error(ErrorCode::InvalidInput, "moment order must be nonnegative");
  if (r == 0) return 1.0;
  const int max_order = capabilities().max_moment_order;
  if (r > max_order) {
    throw Error(ErrorCode::MomentsUndefined,
                name() + ": conditional moment of order " + std::to_string(r) + " is not available");
  }
  return moment_impl(r, theta, y_prev);
}

Vector ProcessModel::conditional_moment_grad(int r, const Vector& theta, double y_prev) const {
  (void)conditional_moment(r, theta, y_prev);
  if (r == 0) return Vector::Zero(theta.size());
  return moment_grad_impl(r, theta, y_prev);
}

double ProcessModel::moment_impl(int, const Vector&, double) const {
  throw Error(ErrorCode::MomentsUndefined, name() + " declares no conditional moments");
}

Vector ProcessModel::moment_grad_impl(int r, const Vector& theta, double y_prev) const {
  const auto p = theta.size();
  Vector g(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const double h = fd_step(theta(i));
    Vector up = theta, dn = theta;
    up(i) += h;
    dn(i) -= h;
    g(i) = (moment_impl(r, up, y_prev) - moment_impl(r, dn, y_prev)) / (2.0 * h);
  }
  return g;
}

Vector ProcessModel::analytic_score(const Vector& theta, const TimeSeries& series) const {
  if (!capabilities().analytic_score) {
    throw Error(ErrorCode::NotAvailable, name() + " has no analytic score");
  }
  require_theta(theta);
  return score_impl(theta, series);
}

Matrix ProcessModel::score_information(const Vector& theta, const TimeSeries& series) const {
  if (!capabilities().analytic_score) {
    throw Error(ErrorCode::NotAvailable, name() + " has no analytic score");
  }
  require_theta(theta);
  return score_information_impl(theta, series);
}

Vector ProcessModel::score_impl(const Vector&, const TimeSeries&) const {
  throw Error(ErrorCode::NotAvailable, name() + " has no analytic score");
}

Matrix ProcessModel::score_information_impl(const Vector&, const TimeSeries&) const {
  throw Error(ErrorCode::NotAvailable, name() + " has no analytic score");
}

void ProcessModel::validate_simulation(const Vector& theta) const { require_theta(theta); }

TimeSeries ProcessModel::simulate(const SimSpec& spec) const {
  if (spec.n < 2) throw Error(ErrorCode::InvalidParams, "simulation length must be >= 2");
  if (static_cast<std::size_t>(spec.theta.size()) != param_dim()) {
    throw Error(ErrorCode::InvalidParams, name() + ": wrong number of parameters");
  }
  if (!domain().contains(spec.theta)) {
    throw Error(ErrorCode::InvalidParams, name() + ": parameters outside the domain");
  }
  validate_simulation(spec.theta);
  if (spec.initial_state && !std::isfinite(*spec.initial_state)) {
    throw Error(ErrorCode::InvalidParams, "initial state must be finite");
  }
  return TimeSeries(simulate_impl(spec));
}

}  // namespace tmef
