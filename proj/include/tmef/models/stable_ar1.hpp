#pragma once

#include "tmef/models.hpp"
#include "tmef/rng.hpp"

namespace tmef {

/// Y_j = phi * Y_{j-1} + e_j with symmetric stable noise, E exp(i t e) =
/// exp(-|t|^alpha). The index alpha in (0, 2] is fixed at construction;
/// phi is the only estimated parameter.
class StableAR1 final : public ProcessModel {
 public:
  explicit StableAR1(double alpha);

  double alpha() const noexcept { return alpha_; }

  std::string name() const override { return "stable-ar1"; }
  std::vector<std::string> param_names() const override { return {"phi"}; }
  std::size_t param_dim() const override { return 1; }
  const ParamDomain& domain() const override { return domain_; }
  bool supports(KernelFamily family) const override { return family == KernelFamily::CfReal; }
  Capabilities capabilities() const override;
  Vector default_theta() const override;

 protected:
  KernelValue transform_impl(KernelFamily family, double t, const Vector& theta,
                             double y_prev) const override;
  KernelGradient transform_grad_impl(KernelFamily family, double t, const Vector& theta,
                                     double y_prev) const override;
  double moment_impl(int r, const Vector& theta, double y_prev) const override;
  Vector moment_grad_impl(int r, const Vector& theta, double y_prev) const override;
  void validate_simulation(const Vector& theta) const override;
  double default_initial_state(const Vector&) const override { return 0.0; }
  std::vector<double> simulate_impl(const SimSpec& spec) const override;

 private:
  double alpha_;
  ParamDomain domain_;
};

/// Martingale information per unit of sum y_{j-1}^2 for the single CF point
/// t > 0: 2 t^2 exp(-2 t^a) / (1 - exp(-2^a t^a)).
double stable_information_factor(double t, double alpha);

/// Closed form of the k = 1 CF quasi-score, in the same sign as the
/// engine's projection convention:
///   2 t exp(-t^a) / (1 - exp(-2^a t^a)) * sum y_{j-1} sin(t (y_j - phi y_{j-1})).
double stable_closed_form_quasiscore(double phi, double alpha, double t, const TimeSeries& series);

/// Maximizer of stable_information_factor over t in (0, 5]. At alpha = 2
/// the supremum is the t -> 0 limit 1/2, reported with at_origin set.
struct StableOptimum {
  double t;
  double factor;
  bool at_origin;
};

StableOptimum stable_optimal_point(double alpha);

/// Fisher information of phi per unit sum y_{j-1}^2 for i.i.d. symmetric
/// stable noise, tabulated for alpha in {2, 1.9, 1.7, 1.5, 1.3, 1.1, 1, 0.8}.
std::optional<double> stable_iid_fisher_information(double alpha);

/// One symmetric stable draw with E exp(i t X) = exp(-|t|^alpha)
/// (Chambers-Mallows-Stuck).
double stable_variate(double alpha, CounterRng& rng);

}  // namespace tmef
