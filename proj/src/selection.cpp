#include "tmef/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tmef/error.hpp"

namespace tmef {

std::string_view to_string(OptimumStatus status) {
  switch (status) {
    case OptimumStatus::Interior: return "interior";
    case OptimumStatus::NoInteriorMaximum: return "no_interior_maximum";
  }
  return "unknown";
}

SearchWindow default_window(KernelFamily family) {
  switch (family) {
    case KernelFamily::CfReal: return {1e-3, 5.0};
    case KernelFamily::Mgf: return {-1.0, 1.0};
    case KernelFamily::Laplace: return {1e-3, 10.0};
    case KernelFamily::Pgf: return {1e-3, 0.999};
    case KernelFamily::Moment: return {1.0, 8.0};
  }
  return {0.0, 1.0};
}

std::optional<InfoMatrix> candidate_information(const ProcessModel& model, KernelFamily family,
                                                const std::vector<double>& fixed, double t,
                                                const Vector& theta, const TimeSeries& series) {
  if (!in_index_domain(family, t)) return std::nullopt;
  for (double s : fixed) {
    if (std::abs(s - t) <= kMinPointSeparation) return std::nullopt;
  }
  std::vector<double> pts = fixed;
  pts.push_back(t);
  try {
    InfoMatrix info = information_matrix(model, PointSet(family, std::move(pts)), theta, series);
    if (!info.value().allFinite()) return std::nullopt;
    return info;
  } catch (const Error&) {
    return std::nullopt;
  }
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double objective_of(const InfoMatrix& info, bool use_trace) {
  if (info.dim() == 1) return info.value()(0, 0);
  return use_trace ? info.value().trace() : info.det();
}

struct GridPoint {
  double t;
  InfoMatrix info;
  bool valid;
  bool window_edge;
};

constexpr double kTieTolerance = 1e-10;

// Sub-windows that avoid the degenerate index.
std::vector<SearchWindow> split_window(KernelFamily family, SearchWindow w) {
  const double d = degenerate_index(family);
  if (!(w.lo < d && d < w.hi)) return {w};
  const double gap = 1e-6 * std::max(1.0, std::abs(d));
  return {{w.lo, d - gap}, {d + gap, w.hi}};
}

std::vector<GridPoint> scan(const ProcessModel& model, KernelFamily family,
                            const std::vector<double>& fixed, const Vector& theta,
                            const TimeSeries& series, SearchWindow window, int resolution) {
  const auto parts = split_window(family, window);
  const double total = window.hi - window.lo;
  std::vector<GridPoint> grid;
  for (const auto& part : parts) {
    const int m = parts.size() == 1
                      ? resolution
                      : std::max(3, static_cast<int>(std::lround(resolution * (part.hi - part.lo) / total)));
    for (int i = 0; i < m; ++i) {
      const double t = m == 1 ? part.lo : part.lo + (part.hi - part.lo) * i / (m - 1);
      auto info = candidate_information(model, family, fixed, t, theta, series);
      GridPoint g{t, info ? std::move(*info) : InfoMatrix(), info.has_value(), i == 0 || i == m - 1};
      grid.push_back(std::move(g));
    }
  }
  return grid;
}

}  // namespace

PointOptimum maximize_information_1d(const ProcessModel& model, KernelFamily family,
                                     const std::vector<double>& fixed, const Vector& theta,
                                     const TimeSeries& series, const SelectionConfig& config) {
  const SearchWindow window = config.window.value_or(default_window(family));
  if (!(window.lo < window.hi)) throw Error(ErrorCode::InvalidInput, "search window must have lo < hi");
  if (config.grid_resolution < 2) throw Error(ErrorCode::InvalidInput, "grid resolution must be >= 2");

  const auto grid = scan(model, family, fixed, theta, series, window, config.grid_resolution);
  bool use_trace = model.param_dim() > 1;
  for (const auto& g : grid) {
    if (g.valid && g.info.det() != 0.0) use_trace = false;
  }
  if (model.param_dim() == 1) use_trace = false;

  std::size_t best = grid.size();
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid[i].valid) continue;
    const double v = objective_of(grid[i].info, use_trace);
    // Differences at rounding level count as ties, which go to the smaller t.
    if (v > best_value + kTieTolerance * std::abs(best_value) || best == grid.size()) {
      best_value = v;
      best = i;
    }
  }
  if (best == grid.size()) {
    throw Error(ErrorCode::InvalidInput, "no admissible point in the search window");
  }

  const bool edge = grid[best].window_edge || !grid[best - 1].valid || !grid[best + 1].valid;
  if (edge) return {grid[best].t, best_value, OptimumStatus::NoInteriorMaximum};

  auto f = [&](double t) {
    const auto info = candidate_information(model, family, fixed, t, theta, series);
    return info ? objective_of(*info, use_trace) : kNaN;
  };
  // Golden-section search for a maximum on [a, b]; NaN counts as -inf.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = grid[best - 1].t, b = grid[best + 1].t;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  auto better = [](double x, double y) { return !std::isnan(x) && (std::isnan(y) || x > y); };
  for (int it = 0; it < 200 && (b - a) > 1e-10 * std::max(1.0, std::abs(a)); ++it) {
    if (better(fd, fc)) {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    }
  }
  const double tm = 0.5 * (a + b);
  const double fm = f(tm);
  if (better(fm, best_value)) return {tm, fm, OptimumStatus::Interior};
  return {grid[best].t, best_value, OptimumStatus::Interior};
}

namespace {

double trace_value(const InfoMatrix& info) {
  return info.dim() == 1 ? info.value()(0, 0) : info.det();
}

std::vector<double> uniform_points(SearchWindow w, std::size_t k) {
  std::vector<double> pts(k);
  for (std::size_t i = 0; i < k; ++i) {
    pts[i] = k == 1 ? w.lo : w.lo + (w.hi - w.lo) * static_cast<double>(i) / static_cast<double>(k - 1);
  }
  return pts;
}

InfoTrace trace_for(const ProcessModel& model, const PointSet& points, const Vector& theta,
                    const TimeSeries& series, const std::vector<OptimumStatus>& statuses) {
  InfoTrace trace;
  const auto& pts = points.points();
  for (std::size_t k = 1; k <= pts.size(); ++k) {
    const PointSet prefix(points.family(), {pts.begin(), pts.begin() + static_cast<long>(k)});
    const double info = trace_value(information_matrix(model, prefix, theta, series));
    trace.push_back({k, pts[k - 1], info,
                     k - 1 < statuses.size() ? statuses[k - 1] : OptimumStatus::Interior});
  }
  return trace;
}

bool gain_too_small(double previous, double next, double tol) {
  if (!(previous > 0.0)) return false;
  return (next - previous) / std::abs(previous) < tol;
}

}  // namespace

Selection greedy_select(const ProcessModel& model, KernelFamily family, const Vector& theta,
                        const TimeSeries& series, const SelectionConfig& config) {
  if (config.k_max < 1) throw Error(ErrorCode::InvalidInput, "k_max must be >= 1");
  if (family == KernelFamily::Moment) {
    PointSet points(family, uniform_points({1.0, static_cast<double>(config.k_max)}, config.k_max));
    return {points, trace_for(model, points, theta, series, {}), std::nullopt};
  }
  if (config.mode == SelectionMode::UniformSpacing) {
    PointSet points(family, uniform_points(config.window.value_or(default_window(family)), config.k_max));
    return {points, trace_for(model, points, theta, series, {}), std::nullopt};
  }

  std::vector<double> pts;
  InfoTrace trace;
  std::optional<InfoTraceEntry> rejected;
  for (std::size_t k = 1; k <= config.k_max; ++k) {
    const PointOptimum opt = maximize_information_1d(model, family, pts, theta, series, config);
    const auto info = candidate_information(model, family, pts, opt.t, theta, series);
    if (!info) break;
    const InfoTraceEntry entry{k, opt.t, trace_value(*info), opt.status};
    if (!trace.empty() && gain_too_small(trace.back().info, entry.info, config.rel_gain_tol)) {
      rejected = entry;
      break;
    }
    pts.push_back(opt.t);
    trace.push_back(entry);
  }
  if (pts.empty()) throw Error(ErrorCode::InvalidInput, "no admissible point could be selected");
  return {PointSet(family, std::move(pts)), std::move(trace), rejected};
}

namespace {

std::size_t info_rank(const ProcessModel& model, const PointSet& points, const Vector& theta,
                      const TimeSeries& series) {
  try {
    return information_matrix(model, points, theta, series).effective_rank();
  } catch (const Error&) {
    return 0;
  }
}

SolveReport solve_points(const ProcessModel& model, const PointSet& points, const Vector& theta0,
                         const TimeSeries& series, const SelectionConfig& config) {
  SolveOptions opt = config.solver;
  if (!opt.domain) opt.domain = model.domain();
  return solve([&](const Vector& th) { return quasi_score(model, points, th, series); }, theta0, opt);
}

}  // namespace

TwoStepResult two_step_iterate(const ProcessModel& model, KernelFamily family, const Vector& theta0,
                               const TimeSeries& series, const SelectionConfig& config) {
  if (config.k_max < 1) throw Error(ErrorCode::InvalidInput, "k_max must be >= 1");
  if (!model.supports(family)) {
    throw Error(ErrorCode::UnsupportedKernel,
                model.name() + " does not support the " + std::string(to_string(family)) + " kernel");
  }
  const std::size_t p = model.param_dim();
  TwoStepResult result;
  result.theta = theta0;

  std::optional<std::vector<double>> fixed = config.fixed_points;
  if (!fixed && family == KernelFamily::Moment) {
    fixed = uniform_points({1.0, static_cast<double>(config.k_max)}, config.k_max);
  }
  if (!fixed && config.mode == SelectionMode::UniformSpacing) {
    fixed = uniform_points(config.window.value_or(default_window(family)), config.k_max);
  }

  if (fixed) {
    const PointSet points(family, *fixed);
    result.last_solve = solve_points(model, points, theta0, series, config);
    result.iterations = 1;
    result.theta = result.last_solve.theta;
    result.converged = result.last_solve.converged;
    result.multiple_roots = result.last_solve.multiple_roots;
    result.points = points;
  } else {
    std::vector<double> pts;
    std::vector<OptimumStatus> statuses;
    Vector theta = theta0;
    bool solved_once = false;
    bool stage_converged = false;
    for (std::size_t k = 1; k <= config.k_max; ++k) {
      Vector stage_theta = theta;
      PointOptimum opt;
      bool solved = false;
      bool settled = false;
      int refreshes = 0;
      SolveReport stage_report;
      while (result.iterations < config.max_iterations) {
        opt = maximize_information_1d(model, family, pts, stage_theta, series, config);
        std::vector<double> trial = pts;
        trial.push_back(opt.t);
        const PointSet points(family, trial);
        if (info_rank(model, points, stage_theta, series) < p) break;
        stage_report = solve_points(model, points, stage_theta, series, config);
        ++result.iterations;
        solved = true;
        const double delta = (stage_report.theta - stage_theta).cwiseAbs().maxCoeff();
        stage_theta = stage_report.theta;
        if (!stage_report.converged) break;
        if (delta < config.theta_tol) {
          settled = true;
          break;
        }
        if (config.refresh_once && ++refreshes >= 2) {
          settled = true;
          break;
        }
      }

      // Gain test at a common parameter value.
      if (!pts.empty()) {
        const auto before = candidate_information(model, family,
                                                  std::vector<double>(pts.begin(), pts.end() - 1),
                                                  pts.back(), stage_theta, series);
        const auto after = candidate_information(model, family, pts, opt.t, stage_theta, series);
        if (before && after &&
            gain_too_small(trace_value(*before), trace_value(*after), config.rel_gain_tol)) {
          break;
        }
      }
      pts.push_back(opt.t);
      statuses.push_back(opt.status);
      if (solved) {
        theta = stage_theta;
        result.last_solve = stage_report;
        result.multiple_roots = stage_report.multiple_roots;
        solved_once = true;
        stage_converged = settled && stage_report.converged;
        if (!stage_report.converged) break;
      }
      if (result.iterations >= config.max_iterations) break;
    }
    result.theta = theta;
    result.converged = solved_once && stage_converged;
    result.points = PointSet(family, pts);
    result.trace = trace_for(model, *result.points, theta, series, statuses);
    result.info = information_matrix(model, *result.points, theta, series);
    return result;
  }

  result.trace = trace_for(model, *result.points, result.theta, series, {});
  result.info = information_matrix(model, *result.points, result.theta, series);
  return result;
}

}  // namespace tmef
