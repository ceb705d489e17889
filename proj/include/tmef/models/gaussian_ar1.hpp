#pragma once

#include "tmef/models.hpp"

namespace tmef {

/// Y_j = phi Y_{j-1} + sigma Z_j, Z_j standard normal; sigma is fixed.
class GaussianAR1 final : public ProcessModel {
 public:
  explicit GaussianAR1(double sigma = 1.0);

  double sigma() const noexcept { return sigma_; }

  std::string name() const override { return "gaussian-ar1"; }
  std::vector<std::string> param_names() const override { return {"phi"}; }
  std::size_t param_dim() const override { return 1; }
  const ParamDomain& domain() const override { return domain_; }
  bool supports(KernelFamily family) const override { return family != KernelFamily::Pgf; }
  Capabilities capabilities() const override;
  Vector default_theta() const override;

 protected:
  KernelValue transform_impl(KernelFamily family, double t, const Vector& theta,
                             double y_prev) const override;
  KernelGradient transform_grad_impl(KernelFamily family, double t, const Vector& theta,
                                     double y_prev) const override;
  double moment_impl(int r, const Vector& theta, double y_prev) const override;
  Vector moment_grad_impl(int r, const Vector& theta, double y_prev) const override;
  Vector score_impl(const Vector& theta, const TimeSeries& series) const override;
  Matrix score_information_impl(const Vector& theta, const TimeSeries& series) const override;
  void validate_simulation(const Vector& theta) const override;
  double default_initial_state(const Vector&) const override { return 0.0; }
  std::vector<double> simulate_impl(const SimSpec& spec) const override;

 private:
  double sigma_;
  ParamDomain domain_;
};

}  // namespace tmef
