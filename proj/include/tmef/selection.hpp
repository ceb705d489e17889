#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "tmef/estfun.hpp"
#include "tmef/solver.hpp"

namespace tmef {

enum class SelectionMode { GreedyOptimal, UniformSpacing };

struct SearchWindow {
  double lo;
  double hi;
};

/// CF (1e-3, 5), MGF (-1, 1) minus the origin, Laplace (1e-3, 10),
/// PGF (1e-3, 0.999), moment (1, 8).
SearchWindow default_window(KernelFamily family);

struct SelectionConfig {
  std::size_t k_max = 1;
  std::optional<SearchWindow> window;  ///< default_window(family) when unset
  int grid_resolution = 200;
  double rel_gain_tol = 1e-3;
  SelectionMode mode = SelectionMode::GreedyOptimal;

  // two_step_iterate only
  std::optional<std::vector<double>> fixed_points;  ///< bypass selection entirely
  bool refresh_once = false;  ///< reselect each point at most once after its first solve
  int max_iterations = 50;
  double theta_tol = 1e-6;
  SolveOptions solver;
};

enum class OptimumStatus { Interior, NoInteriorMaximum };

std::string_view to_string(OptimumStatus status);

struct PointOptimum {
  double t = 0.0;
  double info = 0.0;  ///< the objective at t
  OptimumStatus status = OptimumStatus::Interior;
};

/// Information of `fixed` plus the candidate `t`; nullopt when t is
/// inadmissible, too close to a fixed point, or the evaluation fails.
std::optional<InfoMatrix> candidate_information(const ProcessModel& model, KernelFamily family,
                                                const std::vector<double>& fixed, double t,
                                                const Vector& theta, const TimeSeries& series);

/// Maximizes the information of `fixed` plus one free point over the
/// window: grid scan (ties to the smaller t), then golden-section
/// refinement between the neighbours of the best grid point. The objective
/// is the scalar information for p = 1 and det for p > 1, falling back to
/// the trace when every grid det is zero. A best point on the window edge
/// or next to an inadmissible grid point is returned with
/// NoInteriorMaximum. Throws InvalidInput when no grid point is usable.
PointOptimum maximize_information_1d(const ProcessModel& model, KernelFamily family,
                                     const std::vector<double>& fixed, const Vector& theta,
                                     const TimeSeries& series, const SelectionConfig& config);

struct InfoTraceEntry {
  std::size_t k;
  double t;
  double info;  ///< scalar information for p = 1, det otherwise
  OptimumStatus status = OptimumStatus::Interior;
};

using InfoTrace = std::vector<InfoTraceEntry>;

struct Selection {
  PointSet points;
  InfoTrace trace;
  std::optional<InfoTraceEntry> rejected;  ///< candidate that failed the gain test
};

/// Appends one optimal point at a time with earlier points frozen; stops at
/// k_max or when the relative information gain drops below rel_gain_tol.
/// Uniform-spacing mode returns k_max evenly spaced window points, and the
/// moment family always uses {1, .., k_max}.
Selection greedy_select(const ProcessModel& model, KernelFamily family, const Vector& theta,
                        const TimeSeries& series, const SelectionConfig& config);

struct TwoStepResult {
  Vector theta;
  std::optional<PointSet> points;
  InfoTrace trace;
  InfoMatrix info;
  int iterations = 0;  ///< number of quasi-score solves
  bool converged = false;
  SolveReport last_solve;
  bool multiple_roots = false;
};

/// Point k is chosen at the current estimate, the quasi-score for points
/// 1..k is solved, and the two steps alternate until the estimate moves by
/// less than theta_tol; then point k + 1 is added the same way. Solves are
/// skipped while the information has rank below p. With fixed points (or
/// the moment family) there is a single solve.
TwoStepResult two_step_iterate(const ProcessModel& model, KernelFamily family, const Vector& theta0,
                               const TimeSeries& series, const SelectionConfig& config);

}  // namespace tmef
