#include "tmef/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tmef/error.hpp"
#include "tmef/estfun.hpp"
#include "tmef/models/gaussian_ar1.hpp"
#include "tmef/models/gamma_ar1.hpp"
#include "tmef/models/stable_ar1.hpp"
#include "tmef/simd/lag_moments.hpp"

namespace tmef {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::NonConvergence: return "non_convergence";
    case SolveStatus::SingularJacobian: return "singular_jacobian";
    case SolveStatus::InvalidStart: return "invalid_start";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// nullopt for points where g throws or returns non-finite values.
std::optional<Vector> try_eval(const EstimatingFunction& g, const Vector& theta,
                               const ParamDomain* domain, Eigen::Index expected) {
  if (domain && !domain->contains(theta)) return std::nullopt;
  try {
    Vector v = g(theta);
    if (v.size() != expected || !v.allFinite()) return std::nullopt;
    return v;
  } catch (const Error&) {
    return std::nullopt;
  }
}

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

SolveReport invalid_start(const Vector& theta0) {
  SolveReport r;
  r.theta = theta0;
  r.residual_norm = kInf;
  r.status = SolveStatus::InvalidStart;
  return r;
}

struct ScanPoint {
  double x;
  double f;
};

SolveReport solve_scalar(const EstimatingFunction& g, const Vector& theta0, double f0,
                         const SolveOptions& opt) {
  const ParamDomain* domain = opt.domain ? &*opt.domain : nullptr;
  auto f = [&](double x) -> std::optional<double> {
    const auto v = try_eval(g, Vector::Constant(1, x), domain, 1);
    if (!v) return std::nullopt;
    return (*v)(0);
  };
  const double x0 = theta0(0);
  const double tol = opt.rel_tol * (1.0 + std::abs(f0));

  SolveReport report;
  report.theta = theta0;
  report.residual_norm = std::abs(f0);
  report.jacobian_condition = 1.0;
  if (std::abs(f0) < tol) {
    report.converged = true;
    report.status = SolveStatus::Converged;
    return report;
  }

  // Doubling scan on each side; adjacent samples with opposite signs bracket a root.
  const double step0 = opt.scan_step > 0.0 ? opt.scan_step : 1e-3 * std::max(1.0, std::abs(x0));
  const double radius = opt.scan_radius > 0.0 ? opt.scan_radius : 10.0 * std::max(1.0, std::abs(x0));
  struct Bracket {
    ScanPoint a, b;
    double distance;
  };
  std::vector<Bracket> brackets;
  for (int side : {-1, 1}) {
    ScanPoint prev{x0, f0};
    for (double d = step0; d <= radius * (1.0 + 1e-12); d *= 2.0) {
      const double x = x0 + side * d;
      const auto fx = f(x);
      if (!fx) break;
      const ScanPoint cur{x, *fx};
      if (std::abs(cur.f) < tol) {
        brackets.push_back({cur, cur, d});
      } else if ((prev.f < 0.0) != (cur.f < 0.0)) {
        brackets.push_back({prev, cur, std::abs(prev.x - x0)});
      }
      prev = cur;
    }
  }
  report.multiple_roots = brackets.size() > 1;
  if (brackets.empty()) {
    report.status = SolveStatus::NonConvergence;
    return report;
  }
  const Bracket nearest = *std::min_element(
      brackets.begin(), brackets.end(),
      [](const Bracket& l, const Bracket& r) { return l.distance < r.distance; });

  ScanPoint lo = nearest.a, hi = nearest.b;
  if (lo.x > hi.x) std::swap(lo, hi);
  ScanPoint best = std::abs(lo.f) < std::abs(hi.f) ? lo : hi;
  double x = best.x;
  double fx = best.f;
  for (int it = 0; it < opt.max_iterations; ++it) {
    report.iterations = it + 1;
    if (std::abs(fx) < tol) break;
    // Newton proposal from a forward difference, bisection when it leaves the bracket.
    double next = 0.5 * (lo.x + hi.x);
    const double h = fd_step(x);
    if (const auto fh = f(x + h)) {
      const double slope = (*fh - fx) / h;
      if (slope != 0.0 && std::isfinite(slope)) {
        const double newton = x - fx / slope;
        const double margin = 1e-3 * (hi.x - lo.x);
        if (newton > lo.x + margin && newton < hi.x - margin) next = newton;
      }
    }
    const auto fn = f(next);
    if (!fn) {
      next = 0.5 * (lo.x + hi.x);
      const auto fm = f(next);
      if (!fm) break;
      fx = *fm;
    } else {
      fx = *fn;
    }
    x = next;
    if ((fx < 0.0) == (lo.f < 0.0)) {
      lo = {x, fx};
    } else {
      hi = {x, fx};
    }
    if (std::abs(fx) < std::abs(best.f)) best = {x, fx};
    if (hi.x - lo.x <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
      break;
    }
  }
  report.theta = Vector::Constant(1, best.x);
  report.residual_norm = std::abs(best.f);
  report.converged = report.residual_norm < tol;
  report.status = report.converged ? SolveStatus::Converged : SolveStatus::NonConvergence;
  return report;
}

SolveReport solve_vector(const EstimatingFunction& g, const Vector& theta0, const Vector& g0,
                         const SolveOptions& opt) {
  const ParamDomain* domain = opt.domain ? &*opt.domain : nullptr;
  const auto p = theta0.size();
  const double tol = opt.rel_tol * (1.0 + inf_norm(g0));

  SolveReport report;
  Vector x = theta0;
  Vector fx = g0;
  report.theta = x;
  report.residual_norm = inf_norm(fx);

  for (int it = 0; it < opt.max_iterations; ++it) {
    if (inf_norm(fx) < tol) {
      report.converged = true;
      report.status = SolveStatus::Converged;
      return report;
    }
    report.iterations = it + 1;
    const Matrix jac = forward_difference_jacobian(g, x, fx, domain);
    report.jacobian_condition = condition_number(jac);
    if (!(report.jacobian_condition <= opt.max_condition)) {
      report.status = SolveStatus::SingularJacobian;
      return report;
    }
    const Vector dx = jac.colPivHouseholderQr().solve(-fx);
    const double norm0 = fx.norm();
    bool accepted = false;
    double damping = 1.0;
    for (int halving = 0; halving < 40; ++halving, damping *= 0.5) {
      Vector trial = x + damping * dx;
      if (domain) trial = domain->project(trial);
      const auto ft = try_eval(g, trial, domain, p);
      if (ft && ft->norm() < (1.0 - 1e-4 * damping) * norm0) {
        x = std::move(trial);
        fx = *ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    report.theta = x;
    report.residual_norm = inf_norm(fx);
  }
  report.converged = report.residual_norm < tol;
  report.status = report.converged ? SolveStatus::Converged : SolveStatus::NonConvergence;
  return report;
}

}  // namespace

Matrix forward_difference_jacobian(const EstimatingFunction& g, const Vector& theta, const Vector& g0,
                                   const ParamDomain* domain) {
  const auto p = theta.size();
  Matrix jac(g0.size(), p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const double h = fd_step(theta(i));
    Vector up = theta;
    up(i) += h;
    auto gu = try_eval(g, up, domain, g0.size());
    double signed_h = h;
    if (!gu) {
      up(i) = theta(i) - h;
      signed_h = -h;
      gu = try_eval(g, up, domain, g0.size());
    }
    if (!gu) {
      jac.col(i).setConstant(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    jac.col(i) = (*gu - g0) / signed_h;
  }
  return jac;
}

SolveReport solve(const EstimatingFunction& g, const Vector& theta0, const SolveOptions& options) {
  const ParamDomain* domain = options.domain ? &*options.domain : nullptr;
  const auto p = theta0.size();
  if (p == 0) throw Error(ErrorCode::InvalidInput, "solve needs at least one parameter");
  const auto g0 = try_eval(g, theta0, domain, p);
  if (!g0) return invalid_start(theta0);
  if (p == 1) return solve_scalar(g, theta0, (*g0)(0), options);
  return solve_vector(g, theta0, *g0, options);
}

namespace {

// Gauss-Newton on the free coordinates of theta.
Vector gauss_newton_cls(const ProcessModel& model, const TimeSeries& series, Vector theta,
                        const std::vector<Eigen::Index>& free) {
  const auto y = series.values();
  const auto m = static_cast<Eigen::Index>(y.size() - 1);
  const auto q = static_cast<Eigen::Index>(free.size());
  auto residuals = [&](const Vector& th, Matrix* jac) {
    Vector r(m);
    if (jac) jac->resize(m, q);
    for (Eigen::Index j = 0; j < m; ++j) {
      r(j) = y[j + 1] - model.conditional_moment(1, th, y[j]);
      if (jac) {
        const Vector d = model.conditional_moment_grad(1, th, y[j]);
        for (Eigen::Index c = 0; c < q; ++c) (*jac)(j, c) = d(free[c]);
      }
    }
    return r;
  };

  Matrix jac;
  Vector r = residuals(theta, &jac);
  if (numerical_rank(jac, 1e-10) < static_cast<std::size_t>(q)) {
    throw Error(ErrorCode::DegenerateSystem,
                "conditional least-squares equations are functionally dependent");
  }
  double ssr = r.squaredNorm();
  for (int it = 0; it < 200; ++it) {
    const Vector step = jac.colPivHouseholderQr().solve(r);
    bool improved = false;
    for (double damping = 1.0; damping > 1e-10; damping *= 0.5) {
      Vector trial = theta;
      for (Eigen::Index c = 0; c < q; ++c) trial(free[c]) += damping * step(c);
      trial = model.domain().project(trial);
      Matrix tj;
      Vector tr;
      try {
        tr = residuals(trial, &tj);
      } catch (const Error&) {
        continue;
      }
      const double tssr = tr.squaredNorm();
      if (tssr <= ssr) {
        const double change = (trial - theta).cwiseAbs().maxCoeff();
        theta = std::move(trial);
        r = std::move(tr);
        jac = std::move(tj);
        improved = ssr - tssr > 1e-15 * ssr && change > 1e-14 * (1.0 + theta.cwiseAbs().maxCoeff());
        ssr = tssr;
        break;
      }
    }
    if (!improved) break;
  }
  return theta;
}

}  // namespace

Vector cls_estimate(const ProcessModel& model, const TimeSeries& series,
                    const std::vector<std::optional<double>>& fixed) {
  const auto p = static_cast<Eigen::Index>(model.param_dim());
  if (!fixed.empty() && static_cast<Eigen::Index>(fixed.size()) != p) {
    throw Error(ErrorCode::InvalidInput, "fixed-parameter mask has the wrong length");
  }
  if (model.capabilities().max_moment_order < 1) {
    throw Error(ErrorCode::MomentsUndefined, model.name() + " has no conditional mean");
  }
  Vector theta = model.default_theta();
  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < p; ++i) {
    if (!fixed.empty() && fixed[i]) {
      theta(i) = *fixed[i];
    } else {
      free.push_back(i);
    }
  }
  if (!model.domain().contains(theta)) {
    throw Error(ErrorCode::InvalidParams, "fixed parameter values lie outside the domain");
  }
  if (free.empty()) return theta;

  if (const auto* g = dynamic_cast<const GaussianAR1*>(&model)) {
    (void)g;
    const auto s = simd::lag_power_sums(series.values());
    if (!(s(2, 0) > 0.0)) throw Error(ErrorCode::DegenerateSystem, "all lagged values are zero");
    return Vector::Constant(1, s(1, 1) / s(2, 0));
  }
  return gauss_newton_cls(model, series, theta, free);
}

namespace {

Vector gar1_moment_fit(const GammaAR1& model, const TimeSeries& series) {
  const auto y = series.values();
  const auto s = simd::lag_power_sums(y);
  const double n = s(0, 0);
  const double sxx = s(2, 0) - s(1, 0) * s(1, 0) / n;
  if (!(sxx > 0.0)) return model.default_theta();
  // y_j = a + b y_{j-1}: a = nu / alpha, b = lambda / alpha
  const double b = (s(1, 1) - s(1, 0) * s(0, 1) / n) / sxx;
  const double a = (s(0, 1) - b * s(1, 0)) / n;
  // squared residuals on y_{j-1}: Var = nu / alpha^2 + 2 lambda y / alpha^2
  double sr = 0.0, sxr = 0.0;
  for (std::size_t j = 1; j < y.size(); ++j) {
    const double e = y[j] - a - b * y[j - 1];
    sr += e * e;
    sxr += y[j - 1] * e * e;
  }
  const double c1 = (sxr - s(1, 0) * sr / n) / sxx;
  const double c0 = (sr - c1 * s(1, 0)) / n;
  double alpha = a > 0.0 && c0 > 0.0 ? a / c0 : 0.0;
  if (!(alpha > 0.0) && b > 0.0 && c1 > 0.0) alpha = 2.0 * b / c1;
  if (!(alpha > 0.0) || !std::isfinite(alpha)) return model.default_theta();
  Vector theta{{std::max(b, 0.0) * alpha, alpha, std::max(a, 1e-6) * alpha}};
  return model.domain().project(theta);
}

}  // namespace

Vector preliminary_estimate(const ProcessModel& model, const TimeSeries& series) {
  if (const auto* gar = dynamic_cast<const GammaAR1*>(&model)) return gar1_moment_fit(*gar, series);
  if (const auto* stable = dynamic_cast<const StableAR1*>(&model)) {
    const auto y = series.values();
    const auto s = simd::lag_power_sums(y);
    const double start = s(2, 0) > 0.0 ? s(1, 1) / s(2, 0) : 0.0;
    double ymax = 0.0;
    for (double v : y) ymax = std::max(ymax, std::abs(v));
    const double t = 0.01 / std::max(ymax, 1e-12);
    const PointSet points(KernelFamily::CfReal, {t});
    const SolveReport r = solve(
        [&](const Vector& th) { return quasi_score(*stable, points, th, series); },
        Vector::Constant(1, start));
    return r.converged ? r.theta : Vector::Constant(1, start);
  }
  return cls_estimate(model, series);
}

}  // namespace tmef
