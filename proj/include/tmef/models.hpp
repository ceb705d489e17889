#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tmef/kernels.hpp"
#include "tmef/linalg.hpp"

namespace tmef {

/// Observed or simulated values y_1..y_n. Estimation conditions on y_1.
class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  bool operator==(const TimeSeries&) const = default;

 private:
  std::vector<double> values_;
};

struct ParamBounds {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool lower_open = true;
  bool upper_open = true;
};

struct ParamDomain {
  std::vector<ParamBounds> bounds;

  bool contains(const Vector& theta) const;
  /// Nearest point of the closed box, pulled slightly inside open bounds.
  Vector project(const Vector& theta) const;
};

struct Capabilities {
  bool analytic_transform_gradient = false;
  int max_moment_order = 0;  ///< 0: no finite conditional moments declared
  bool analytic_score = false;
  bool closed_form_quasiscore = false;
};

/// d/dtheta of a conditional transform; `im` is used for CfReal only.
struct KernelGradient {
  Vector re;
  Vector im;
};

struct SimSpec {
  Vector theta;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t burn_in = 500;
  std::optional<double> initial_state;  ///< default: model-specific rule
  std::uint64_t stream = 0;
};

/// A first-order Markov process specified through conditional transforms
/// c(t) = E(g_t(Y_j) | Y_{j-1}). Models are immutable after construction.
///
/// Public entry points validate and then dispatch to the protected
/// implementation hooks. Transform evaluation accepts any real index,
/// including the degenerate one, because covariance entries are built from
/// closure indices such as t - s.
class ProcessModel {
 public:
  virtual ~ProcessModel() = default;

  virtual std::string name() const = 0;
  virtual std::vector<std::string> param_names() const = 0;
  virtual std::size_t param_dim() const { return param_names().size(); }
  virtual const ParamDomain& domain() const = 0;
  virtual bool supports(KernelFamily family) const = 0;
  virtual Capabilities capabilities() const = 0;
  virtual Vector default_theta() const = 0;

  /// E(g_t(Y_j) | Y_{j-1} = y_prev). Throws UnsupportedKernel or
  /// TransformDiverges outside the existence region.
  KernelValue conditional_transform(KernelFamily family, double t, const Vector& theta,
                                    double y_prev) const;

  /// Gradient of conditional_transform in theta: analytic when declared,
  /// otherwise central differences with step cbrt(eps) * max(1, |theta_i|).
  KernelGradient conditional_transform_grad(KernelFamily family, double t, const Vector& theta,
                                            double y_prev) const;

  /// The finite-difference route, always available; used to check the
  /// analytic gradients.
  KernelGradient transform_grad_fd(KernelFamily family, double t, const Vector& theta,
                                   double y_prev) const;

  /// E(Y_j^r | Y_{j-1} = y_prev).
  double conditional_moment(int r, const Vector& theta, double y_prev) const;
  Vector conditional_moment_grad(int r, const Vector& theta, double y_prev) const;

  /// Exact score S_n(theta) and conditional Fisher information
  /// sum_j E(s_j s_j' | F_{j-1}); NotAvailable unless declared.
  Vector analytic_score(const Vector& theta, const TimeSeries& series) const;
  Matrix score_information(const Vector& theta, const TimeSeries& series) const;

  /// Deterministic in (spec.seed, spec.stream).
  TimeSeries simulate(const SimSpec& spec) const;

 protected:
  virtual KernelValue transform_impl(KernelFamily family, double t, const Vector& theta,
                                     double y_prev) const = 0;
  virtual KernelGradient transform_grad_impl(KernelFamily family, double t, const Vector& theta,
                                             double y_prev) const;
  virtual double moment_impl(int r, const Vector& theta, double y_prev) const;
  virtual Vector moment_grad_impl(int r, const Vector& theta, double y_prev) const;
  virtual Vector score_impl(const Vector& theta, const TimeSeries& series) const;
  virtual Matrix score_information_impl(const Vector& theta, const TimeSeries& series) const;
  virtual void validate_simulation(const Vector& theta) const;
  virtual double default_initial_state(const Vector& theta) const = 0;
  virtual std::vector<double> simulate_impl(const SimSpec& spec) const = 0;

  void require_theta(const Vector& theta) const;
};

/// Central-difference step used for parameter gradients.
double fd_step(double x);

enum class ModelId { StableAR1, GammaAR1, GaussianAR1, BinaryMarkov };

std::optional<ModelId> parse_model_id(std::string_view name);
std::string_view to_string(ModelId id);

/// Model constants that are not estimated.
struct ModelOptions {
  double stable_alpha = 1.5;
  double gaussian_sigma = 1.0;
};

std::unique_ptr<ProcessModel> make_model(ModelId id, const ModelOptions& options = {});

}  // namespace tmef
