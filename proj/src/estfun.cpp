#include "tmef/estfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "tmef/error.hpp"

namespace tmef {

PointSet::PointSet(KernelFamily family, std::vector<double> points)
    : family_(family), points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorCode::InvalidInput, "a point set needs at least one point");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    require_index(family_, points_[i]);
    for (std::size_t l = 0; l < i; ++l) {
      if (std::abs(points_[i] - points_[l]) <= kMinPointSeparation) {
        throw Error(ErrorCode::InvalidInput, "points " + std::to_string(points_[l]) + " and " +
                                                 std::to_string(points_[i]) + " are not distinct");
      }
    }
  }
}

bool PointSet::accepts(double t) const {
  if (!in_index_domain(family_, t)) return false;
  return std::none_of(points_.begin(), points_.end(),
                      [t](double s) { return std::abs(s - t) <= kMinPointSeparation; });
}

PointSet PointSet::with_point(double t) const {
  std::vector<double> pts = points_;
  pts.push_back(t);
  return PointSet(family_, std::move(pts));
}

Vector martingale_difference(const ProcessModel& model, KernelFamily family, double t,
                             const Vector& theta, double y_prev, double y_j) {
  const KernelValue g = eval(family, t, y_j);
  const KernelValue c = model.conditional_transform(family, t, theta, y_prev);
  if (family == KernelFamily::CfReal) return Vector{{g.re - c.re, g.im - c.im}};
  return Vector::Constant(1, g.re - c.re);
}

namespace {

// Transform values at closure indices, memoized within one step: CF
// products hit t_i - t_l and t_i + t_l from several component pairs.
class ClosureValues {
 public:
  ClosureValues(const ProcessModel& model, KernelFamily family, const Vector& theta, double y_prev)
      : model_(model), family_(family), theta_(theta), y_prev_(y_prev) {}

  KernelValue at(double index) {
    for (const auto& [v, value] : cache_) {
      if (v == index) return value;
    }
    KernelValue value;
    try {
      value = model_.conditional_transform(family_, index, theta_, y_prev_);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TransformDiverges) throw;
      throw Error(ErrorCode::NotClosed, "closure index " + std::to_string(index) +
                                            " leaves the transform's existence region");
    }
    cache_.emplace_back(index, value);
    return value;
  }

 private:
  const ProcessModel& model_;
  KernelFamily family_;
  const Vector& theta_;
  double y_prev_;
  std::vector<std::pair<double, KernelValue>> cache_;
};

double part_of(const KernelValue& v, CfPart part) { return part == CfPart::Cos ? v.re : v.im; }

}  // namespace

StepQuantities step_quantities(const ProcessModel& model, const PointSet& points,
                               const Vector& theta, double y_prev, double y_j) {
  const KernelFamily family = points.family();
  const auto& t = points.points();
  const auto k = static_cast<Eigen::Index>(points.size());
  const auto kp = static_cast<Eigen::Index>(points.components());
  const auto p = theta.size();
  const bool cf = family == KernelFamily::CfReal;

  StepQuantities sq{Vector(kp), Matrix(kp, p), Matrix(kp, kp)};
  Vector mean(kp);
  ClosureValues closure(model, family, theta, y_prev);

  for (Eigen::Index i = 0; i < k; ++i) {
    const KernelValue g = eval(family, t[i], y_j);
    const KernelValue c = closure.at(t[i]);
    const KernelGradient dc = model.conditional_transform_grad(family, t[i], theta, y_prev);
    mean(i) = c.re;
    sq.h(i) = g.re - c.re;
    sq.grad.row(i) = -dc.re.transpose();
    if (cf) {
      mean(k + i) = c.im;
      sq.h(k + i) = g.im - c.im;
      sq.grad.row(k + i) = -dc.im.transpose();
    }
  }

  if (!cf) {
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index l = i; l < k; ++l) {
        const double v = mult_rule(family, t[i], t[l]);
        sq.cov(i, l) = sq.cov(l, i) = closure.at(v).re - mean(i) * mean(l);
      }
    }
    return sq;
  }

  auto component = [&](Eigen::Index a) {
    return std::pair{a < k ? CfPart::Cos : CfPart::Sin, t[a % k]};
  };
  for (Eigen::Index a = 0; a < kp; ++a) {
    const auto [part_a, ta] = component(a);
    for (Eigen::Index b = a; b < kp; ++b) {
      const auto [part_b, tb] = component(b);
      double second = 0.0;
      for (const CfTerm& term : cf_product(part_a, ta, part_b, tb)) {
        second += term.weight * part_of(closure.at(term.index), term.part);
      }
      sq.cov(a, b) = sq.cov(b, a) = second - mean(a) * mean(b);
    }
  }
  return sq;
}

Matrix optimal_weights(const StepQuantities& sq) {
  if (sq.cov.isZero(0.0)) {
    throw Error(ErrorCode::DegenerateCovariance, "conditional covariance is identically zero");
  }
  return -sq.grad.transpose() * symmetric_pinv(sq.cov);
}

InfoMatrix::InfoMatrix(Matrix value) : value_(std::move(value)) {
  if (value_.rows() != value_.cols()) {
    throw Error(ErrorCode::InvalidInput, "information matrix must be square");
  }
}

std::size_t InfoMatrix::effective_rank() const {
  if (value_.size() == 0) return 0;
  return symmetric_rank(value_, 1e-10);
}

double InfoMatrix::det() const {
  if (value_.size() == 0 || effective_rank() < dim()) return 0.0;
  return value_.determinant();
}

double InfoMatrix::objective() const {
  if (value_.rows() == 1) return value_(0, 0);
  return det();
}

namespace {

struct StepContribution {
  Vector score;
  Matrix info;

  StepContribution& operator+=(const StepContribution& other) {
    score += other.score;
    info += other.info;
    return *this;
  }
};

StepContribution step_contribution(const ProcessModel& model, const PointSet& points,
                                   const Vector& theta, double y_prev, double y_j) {
  const StepQuantities sq = step_quantities(model, points, theta, y_prev, y_j);
  if (sq.cov.isZero(0.0)) {
    throw Error(ErrorCode::DegenerateCovariance, "conditional covariance is identically zero");
  }
  const Matrix pinv = symmetric_pinv(sq.cov);
  const Matrix pg = pinv * sq.grad;
  return {-pg.transpose() * sq.h, sq.grad.transpose() * pg};
}

}  // namespace

QuasiScoreEvaluation evaluate_quasi_score(const ProcessModel& model, const PointSet& points,
                                          const Vector& theta, const TimeSeries& series) {
  const auto y = series.values();
  StepContribution total = pairwise_sum<StepContribution>(1, y.size(), [&](std::size_t j) {
    return step_contribution(model, points, theta, y[j - 1], y[j]);
  });
  // Exact symmetry; the products above agree only to rounding.
  Matrix info = 0.5 * (total.info + total.info.transpose());
  return {std::move(total.score), InfoMatrix(std::move(info))};
}

Vector quasi_score(const ProcessModel& model, const PointSet& points, const Vector& theta,
                   const TimeSeries& series) {
  return evaluate_quasi_score(model, points, theta, series).score;
}

InfoMatrix information_matrix(const ProcessModel& model, const PointSet& points,
                              const Vector& theta, const TimeSeries& series) {
  return evaluate_quasi_score(model, points, theta, series).info;
}

double efficiency(const InfoMatrix& a, const InfoMatrix& b) {
  if (a.dim() != b.dim() || a.dim() == 0) {
    throw Error(ErrorCode::InvalidInput, "efficiency needs information matrices of equal dimension");
  }
  const double ref = b.dim() == 1 ? b.value()(0, 0) : b.det();
  if (!(std::abs(ref) > 0.0) || !std::isfinite(ref)) {
    throw Error(ErrorCode::SingularReference, "reference information is singular");
  }
  const double num = a.dim() == 1 ? a.value()(0, 0) : a.det();
  return num / ref;
}

namespace {

struct LowMoments {
  double m1, m2, var, cov12;  // cov12 = Cov(Y, Y^2)
  double d1, d2;              // d/dtheta_i of m1, m2
};

LowMoments low_moments(const ProcessModel& model, const Vector& theta, double y_prev,
                       std::size_t param_index) {
  if (param_index >= model.param_dim()) {
    throw Error(ErrorCode::InvalidInput, "parameter index out of range");
  }
  const auto i = static_cast<Eigen::Index>(param_index);
  LowMoments m;
  m.m1 = model.conditional_moment(1, theta, y_prev);
  m.m2 = model.conditional_moment(2, theta, y_prev);
  const double m3 = model.conditional_moment(3, theta, y_prev);
  m.var = m.m2 - m.m1 * m.m1;
  m.cov12 = m3 - m.m1 * m.m2;
  m.d1 = model.conditional_moment_grad(1, theta, y_prev)(i);
  m.d2 = model.conditional_moment_grad(2, theta, y_prev)(i);
  return m;
}

}  // namespace

ExpansionTerms expansion_terms(const ProcessModel& model, const Vector& theta,
                               const TimeSeries& series, std::size_t param_index) {
  const auto y = series.values();
  auto moments = [&](std::size_t j) {
    const LowMoments m = low_moments(model, theta, y[j - 1], param_index);
    if (!(m.var > 0.0)) {
      throw Error(ErrorCode::DegenerateCovariance, "conditional variance is not positive");
    }
    return m;
  };
  ExpansionTerms out;
  out.sum_k = pairwise_sum<double>(1, y.size(), [&](std::size_t j) {
    const LowMoments m = moments(j);
    const double yj = y[j];
    return (m.d1 * m.var * (yj * yj - m.m2) + (m.d2 * m.var - 2.0 * m.d1 * m.cov12) * (yj - m.m1)) /
           (2.0 * m.var * m.var);
  });
  out.sum_l = pairwise_sum<double>(1, y.size(), [&](std::size_t j) {
    const LowMoments m = moments(j);
    return m.d1 * (m.d2 * m.var - m.d1 * m.cov12) / (m.var * m.var);
  });
  return out;
}

double moment_optimality_condition(const ProcessModel& model, const Vector& theta, double y_prev,
                                   std::size_t param_index) {
  const LowMoments m = low_moments(model, theta, y_prev, param_index);
  return m.d2 * m.var - m.d1 * m.cov12;
}

double conditional_skewness(const ProcessModel& model, const Vector& theta, double y_prev) {
  const double m1 = model.conditional_moment(1, theta, y_prev);
  const double m2 = model.conditional_moment(2, theta, y_prev);
  const double m3 = model.conditional_moment(3, theta, y_prev);
  const double var = m2 - m1 * m1;
  if (!(var > 0.0)) throw Error(ErrorCode::DegenerateCovariance, "conditional variance is not positive");
  const double central3 = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
  return central3 / std::pow(var, 1.5);
}

double moment_optimality_skewness_form(const ProcessModel& model, const Vector& theta,
                                       double y_prev, std::size_t param_index) {
  const LowMoments m = low_moments(model, theta, y_prev, param_index);
  const double dvar = m.d2 - 2.0 * m.m1 * m.d1;
  return dvar - conditional_skewness(model, theta, y_prev) * m.d1 * std::sqrt(m.var);
}

}  // namespace tmef
