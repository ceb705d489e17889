#pragma once

#include "tmef/models.hpp"

namespace tmef {

/// Two-state chain on {0, 1} with P(Y_j = 1 | y) = (1 - y) theta + y (1 - theta):
/// theta is the switching probability. Finite support makes one transform
/// point fully efficient, which is what the fixture is for.
class BinaryMarkov final : public ProcessModel {
 public:
  BinaryMarkov();

  std::string name() const override { return "binary-markov"; }
  std::vector<std::string> param_names() const override { return {"theta"}; }
  std::size_t param_dim() const override { return 1; }
  const ParamDomain& domain() const override { return domain_; }
  bool supports(KernelFamily) const override { return true; }
  Capabilities capabilities() const override;
  Vector default_theta() const override;

  static double prob_one(double theta, double y_prev);

 protected:
  KernelValue transform_impl(KernelFamily family, double t, const Vector& theta,
                             double y_prev) const override;
  KernelGradient transform_grad_impl(KernelFamily family, double t, const Vector& theta,
                                     double y_prev) const override;
  double moment_impl(int r, const Vector& theta, double y_prev) const override;
  Vector moment_grad_impl(int r, const Vector& theta, double y_prev) const override;
  Vector score_impl(const Vector& theta, const TimeSeries& series) const override;
  Matrix score_information_impl(const Vector& theta, const TimeSeries& series) const override;
  double default_initial_state(const Vector&) const override { return 0.0; }
  std::vector<double> simulate_impl(const SimSpec& spec) const override;

 private:
  ParamDomain domain_;
};

}  // namespace tmef
