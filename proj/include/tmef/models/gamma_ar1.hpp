#pragma once

#include <complex>

#include "tmef/models.hpp"

namespace tmef {

/// First-order gamma autoregression with parameters theta = (lambda, alpha, nu)
/// and conditional Laplace transform
///   E exp(-s Y_j | y) = (alpha / (alpha + s))^nu exp(-lambda s y / (alpha + s)),
/// defined for Re(s) > -alpha. Every other kernel is this transform at a
/// transformed argument: MGF s = -t, PGF s = -log t, CF s = -i t.
class GammaAR1 final : public ProcessModel {
 public:
  GammaAR1();

  std::string name() const override { return "gar1"; }
  std::vector<std::string> param_names() const override { return {"lambda", "alpha", "nu"}; }
  std::size_t param_dim() const override { return 3; }
  const ParamDomain& domain() const override { return domain_; }
  bool supports(KernelFamily) const override { return true; }
  Capabilities capabilities() const override;
  Vector default_theta() const override;

  /// The transform at complex argument s; TransformDiverges when Re(s) <= -alpha.
  static std::complex<double> laplace(std::complex<double> s, const Vector& theta, double y_prev);

  /// Conditional cumulant kappa_r = (r-1)! (nu + r lambda y) / alpha^r.
  static double cumulant(int r, const Vector& theta, double y_prev);

 protected:
  KernelValue transform_impl(KernelFamily family, double t, const Vector& theta,
                             double y_prev) const override;
  KernelGradient transform_grad_impl(KernelFamily family, double t, const Vector& theta,
                                     double y_prev) const override;
  double moment_impl(int r, const Vector& theta, double y_prev) const override;
  Vector moment_grad_impl(int r, const Vector& theta, double y_prev) const override;
  void validate_simulation(const Vector& theta) const override;
  double default_initial_state(const Vector& theta) const override;
  std::vector<double> simulate_impl(const SimSpec& spec) const override;

 private:
  ParamDomain domain_;
};

}  // namespace tmef
