#include <doctest.h>

#include <cmath>
#include <random>

#include "tmef/error.hpp"
#include "tmef/models.hpp"
#include "tmef/models/binary_markov.hpp"
#include "tmef/models/gamma_ar1.hpp"
#include "tmef/models/gaussian_ar1.hpp"
#include "tmef/models/stable_ar1.hpp"

using namespace tmef;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidInput;
}

Vector v1(double a) { return Vector::Constant(1, a); }

struct MeanSe {
  double mean, se;
};

MeanSe mean_se(const std::vector<double>& x) {
  double s = 0.0, ss = 0.0;
  for (double v : x) s += v;
  const double m = s / x.size();
  for (double v : x) ss += (v - m) * (v - m);
  return {m, std::sqrt(ss / (x.size() - 1) / x.size())};
}

}  // namespace

TEST_SUITE("models") {
  TEST_CASE("transform examples") {
    StableAR1 cauchy(1.0);
    const auto c = cauchy.conditional_transform(KernelFamily::CfReal, 1.0, v1(0.0), 3.7);
    CHECK(c.re == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(c.im == 0.0);

    GammaAR1 gar;
    const Vector th{{1.0, 2.0, 3.0}};
    CHECK(gar.conditional_transform(KernelFamily::Laplace, 0.0, th, 2.5).re == doctest::Approx(1.0));
    const Vector no_feedback{{0.0, 2.0, 3.0}};
    CHECK(gar.conditional_transform(KernelFamily::Laplace, 2.0, no_feedback, 9.0).re ==
          doctest::Approx(0.125).epsilon(1e-14));
  }

  TEST_CASE("unsupported kernels and divergent transforms") {
    StableAR1 stable(1.5);
    CHECK(code_of([&] { stable.conditional_transform(KernelFamily::Mgf, 0.1, v1(0.5), 1.0); }) ==
          ErrorCode::UnsupportedKernel);
    CHECK(code_of([&] { stable.conditional_transform(KernelFamily::Moment, 1, v1(0.5), 1.0); }) ==
          ErrorCode::UnsupportedKernel);
    GammaAR1 gar;
    const Vector th{{1.0, 2.0, 3.0}};
    // MGF needs t < alpha
    CHECK(code_of([&] { gar.conditional_transform(KernelFamily::Mgf, 2.5, th, 1.0); }) ==
          ErrorCode::TransformDiverges);
    CHECK(code_of([&] { gar.conditional_transform(KernelFamily::Laplace, -2.0, th, 1.0); }) ==
          ErrorCode::TransformDiverges);
    GaussianAR1 gauss;
    CHECK(code_of([&] { gauss.conditional_transform(KernelFamily::Pgf, 0.5, v1(0.5), 1.0); }) ==
          ErrorCode::UnsupportedKernel);
  }

  TEST_CASE("gradient examples") {
    StableAR1 stable(1.3);
    const auto g = stable.conditional_transform_grad(KernelFamily::CfReal, 0.7, v1(0.0), 2.0);
    CHECK(g.re(0) == 0.0);

    GaussianAR1 gauss(1.0);
    const auto gm = gauss.conditional_transform_grad(KernelFamily::Mgf, 1.0, v1(0.0), 2.0);
    const auto fd = gauss.transform_grad_fd(KernelFamily::Mgf, 1.0, v1(0.0), 2.0);
    CHECK(gm.re(0) == doctest::Approx(fd.re(0)).epsilon(1e-8));
    CHECK(gm.re(0) == doctest::Approx(3.2974).epsilon(1e-4));
  }

  TEST_CASE("analytic transform gradients agree with finite differences") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GammaAR1 gar;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const Vector th{{0.2 + 1.5 * u(gen), 1.0 + 2.0 * u(gen), 0.5 + 4.0 * u(gen)}};
      const double y = 6.0 * u(gen);
      const struct {
        KernelFamily f;
        double t;
      } cases[] = {{KernelFamily::Laplace, 0.05 + 3.0 * u(gen)},
                   {KernelFamily::Mgf, -0.9 + 1.6 * u(gen)},
                   {KernelFamily::Pgf, 0.05 + 0.9 * u(gen)},
                   {KernelFamily::CfReal, 0.05 + 3.0 * u(gen)}};
      for (const auto& c : cases) {
        const auto a = gar.conditional_transform_grad(c.f, c.t, th, y);
        const auto b = gar.transform_grad_fd(c.f, c.t, th, y);
        const double scale = std::max({1.0, a.re.cwiseAbs().maxCoeff(), a.im.cwiseAbs().maxCoeff()});
        worst = std::max({worst, (a.re - b.re).cwiseAbs().maxCoeff() / scale,
                          (a.im - b.im).cwiseAbs().maxCoeff() / scale});
      }
    }
    CHECK(worst < 1e-6);

    StableAR1 stable(1.7);
    GaussianAR1 gauss(0.8);
    BinaryMarkov bin;
    for (int i = 0; i < 100; ++i) {
      const double t = 0.05 + 2.0 * u(gen), y = -3.0 + 6.0 * u(gen), phi = -0.9 + 1.8 * u(gen);
      auto cmp = [&](const ProcessModel& m, KernelFamily f, const Vector& th, double yy) {
        const auto a = m.conditional_transform_grad(f, t, th, yy);
        const auto b = m.transform_grad_fd(f, t, th, yy);
        CHECK((a.re - b.re).cwiseAbs().maxCoeff() < 1e-6);
        CHECK((a.im - b.im).cwiseAbs().maxCoeff() < 1e-6);
      };
      cmp(stable, KernelFamily::CfReal, v1(phi), y);
      cmp(gauss, KernelFamily::CfReal, v1(phi), y);
      cmp(gauss, KernelFamily::Mgf, v1(phi), y);
      cmp(gauss, KernelFamily::Laplace, v1(phi), y);
      cmp(bin, KernelFamily::Pgf, v1(0.1 + 0.8 * u(gen)), i % 2);
      cmp(bin, KernelFamily::CfReal, v1(0.1 + 0.8 * u(gen)), i % 2);
    }
  }

  TEST_CASE("conditional moments") {
    GammaAR1 gar;
    const Vector th{{1.0, 2.0, 3.0}};
    // Oracle: first cumulant as -d/ds log L(s) at s = 0 by central differences.
    const double h = 1e-5;
    const double dlog =
        (std::log(GammaAR1::laplace({h, 0.0}, th, 4.0).real()) -
         std::log(GammaAR1::laplace({-h, 0.0}, th, 4.0).real())) / (2 * h);
    CHECK(-dlog == doctest::Approx(3.5).epsilon(1e-8));
    CHECK(gar.conditional_moment(1, th, 4.0) == doctest::Approx(3.5).epsilon(1e-14));

    // Second cumulant from the second derivative of log L, added to m1^2.
    const double h2 = 1e-4;
    auto logl = [&](double s) { return std::log(GammaAR1::laplace({s, 0.0}, th, 4.0).real()); };
    const double k2 = (logl(h2) - 2 * logl(0.0) + logl(-h2)) / (h2 * h2);
    CHECK(gar.conditional_moment(2, th, 4.0) == doctest::Approx(k2 + 3.5 * 3.5).epsilon(1e-6));

    const Vector no_feedback{{0.0, 2.0, 3.0}};
    CHECK(gar.conditional_moment(2, no_feedback, 5.0) == doctest::Approx(3.0 * 4.0 / 4.0));
    // Gamma(3, rate 2) third raw moment nu(nu+1)(nu+2)/alpha^3
    CHECK(gar.conditional_moment(3, no_feedback, 5.0) == doctest::Approx(60.0 / 8.0));

    GaussianAR1 gauss(1.0);
    CHECK(gauss.conditional_moment(1, v1(0.5), 2.0) == doctest::Approx(1.0));
    CHECK(gauss.conditional_moment(2, v1(0.5), 2.0) == doctest::Approx(2.0));
    CHECK(gauss.conditional_moment(4, v1(0.5), 2.0) == doctest::Approx(1.0 + 6.0 + 3.0));

    StableAR1 stable(1.5);
    CHECK(code_of([&] { stable.conditional_moment(1, v1(0.5), 1.0); }) == ErrorCode::MomentsUndefined);
    StableAR1 normal_case(2.0);
    CHECK(normal_case.conditional_moment(2, v1(0.5), 2.0) == doctest::Approx(1.0 + 2.0));
  }

  TEST_CASE("variance is nonnegative and moment gradients match differences") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GammaAR1 gar;
    GaussianAR1 gauss(1.3);
    BinaryMarkov bin;
    for (int i = 0; i < 100; ++i) {
      const Vector th{{0.2 + 1.5 * u(gen), 1.0 + 2.0 * u(gen), 0.5 + 4.0 * u(gen)}};
      const double y = 6.0 * u(gen);
      CHECK(gar.conditional_moment(2, th, y) - std::pow(gar.conditional_moment(1, th, y), 2) >= 0.0);
      for (int r = 1; r <= 4; ++r) {
        const Vector a = gar.conditional_moment_grad(r, th, y);
        Vector b(3);
        for (int k = 0; k < 3; ++k) {
          const double step = 1e-6 * std::max(1.0, th(k));
          Vector up = th, dn = th;
          up(k) += step;
          dn(k) -= step;
          b(k) = (gar.conditional_moment(r, up, y) - gar.conditional_moment(r, dn, y)) / (2 * step);
        }
        CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-5 * std::max(1.0, b.cwiseAbs().maxCoeff()));
      }
      const Vector phi = v1(-0.9 + 1.8 * u(gen));
      for (int r = 1; r <= 4; ++r) {
        const double step = 1e-6;
        const double fd = (gauss.conditional_moment(r, phi + v1(step), y) -
                           gauss.conditional_moment(r, phi - v1(step), y)) / (2 * step);
        CHECK(gauss.conditional_moment_grad(r, phi, y)(0) == doctest::Approx(fd).epsilon(1e-6));
      }
      CHECK(bin.conditional_moment(1, v1(0.3), 1.0) == doctest::Approx(0.7));
    }
  }

  TEST_CASE("simulation is deterministic per seed and stream") {
    GammaAR1 gar;
    SimSpec spec{Vector{{1.0, 2.0, 3.0}}, 500, 7};
    CHECK(gar.simulate(spec) == gar.simulate(spec));
    SimSpec other = spec;
    other.stream = 1;
    CHECK_FALSE(gar.simulate(spec) == gar.simulate(other));
    StableAR1 stable(1.5);
    SimSpec s2{v1(0.6), 300, 42};
    CHECK(stable.simulate(s2) == stable.simulate(s2));
    const TimeSeries positive = gar.simulate(spec);
    for (double v : positive.values()) CHECK(v > 0.0);
  }

  TEST_CASE("simulation parameter checks") {
    GammaAR1 gar;
    CHECK(code_of([&] { gar.simulate({Vector{{2.0, 1.0, 3.0}}, 100, 1}); }) == ErrorCode::InvalidParams);
    StableAR1 stable(1.5);
    CHECK(code_of([&] { stable.simulate({v1(1.2), 100, 1}); }) == ErrorCode::InvalidParams);
    CHECK(code_of([&] { stable.simulate({v1(0.5), 1, 1}); }) == ErrorCode::InvalidParams);
    CHECK(code_of([] { StableAR1 bad(2.5); }) == ErrorCode::InvalidParams);
  }

  TEST_CASE("gar1 long-run mean matches the stationary mean") {
    GammaAR1 gar;
    const TimeSeries series = gar.simulate({Vector{{1.0, 2.0, 3.0}}, 100000, 2024});
    const auto y = series.values();
    double s = 0.0;
    for (double v : y) s += v;
    const double mean = s / y.size();
    // m = (nu + lambda m) / alpha gives m = 3. Stationary variance V solves
    // V = (nu + 2 lambda m) / alpha^2 + (lambda / alpha)^2 V, so V = 3; with
    // lag-one correlation r = lambda / alpha the long-run variance is
    // V (1 + r) / (1 - r).
    const double r = 0.5, var = 3.0;
    const double se = std::sqrt(var * (1 + r) / (1 - r) / y.size());
    CHECK(std::abs(mean - 3.0) < 3.0 * se);
  }

  TEST_CASE("stable alpha = 2 is gaussian with variance 2") {
    StableAR1 stable(2.0);
    const double phi = 0.5;
    const TimeSeries series = stable.simulate({v1(phi), 200000, 99});
    const auto y = series.values();
    double s = 0.0, ss = 0.0;
    for (double v : y) {
      s += v;
      ss += v * v;
    }
    const double mean = s / y.size();
    const double var = ss / y.size() - mean * mean;
    CHECK(var == doctest::Approx(2.0 / (1.0 - phi * phi)).epsilon(0.03));

    // Fourth moment of the noise alone: 3 sigma^4 = 12.
    CounterRng rng(5);
    double m2 = 0.0, m4 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double e = stable_variate(2.0, rng);
      m2 += e * e;
      m4 += e * e * e * e;
    }
    CHECK(m2 / n == doctest::Approx(2.0).epsilon(0.02));
    CHECK(m4 / n == doctest::Approx(12.0).epsilon(0.05));
  }

  TEST_CASE("one-step simulation reproduces the conditional transform") {
    GammaAR1 gar;
    const Vector th{{1.0, 2.0, 3.0}};
    const double y_prev = 2.5;
    const int reps = 20000;
    std::vector<double> draws(reps);
    for (int i = 0; i < reps; ++i) {
      SimSpec spec{th, 2, 17, 0, y_prev, static_cast<std::uint64_t>(i)};
      draws[i] = gar.simulate(spec)[0];
    }
    for (double s : {0.1, 0.3, 0.7, 1.5}) {
      std::vector<double> e(reps);
      for (int i = 0; i < reps; ++i) e[i] = std::exp(-s * draws[i]);
      const auto ms = mean_se(e);
      const double target = gar.conditional_transform(KernelFamily::Laplace, s, th, y_prev).re;
      CHECK(std::abs(ms.mean - target) < 3.0 * ms.se);
    }

    StableAR1 stable(1.3);
    const double phi = 0.6, yp = 1.8;
    std::vector<double> sd(reps);
    for (int i = 0; i < reps; ++i) {
      SimSpec spec{v1(phi), 2, 23, 0, yp, static_cast<std::uint64_t>(i)};
      sd[i] = stable.simulate(spec)[0];
    }
    for (double t : {0.2, 0.6, 1.2}) {
      std::vector<double> c(reps), sn(reps);
      for (int i = 0; i < reps; ++i) {
        c[i] = std::cos(t * sd[i]);
        sn[i] = std::sin(t * sd[i]);
      }
      const auto target = stable.conditional_transform(KernelFamily::CfReal, t, v1(phi), yp);
      const auto mc = mean_se(c), ms = mean_se(sn);
      CHECK(std::abs(mc.mean - target.re) < 3.0 * mc.se);
      CHECK(std::abs(ms.mean - target.im) < 3.0 * ms.se);
    }
  }

  TEST_CASE("analytic score examples") {
    GaussianAR1 gauss(1.0);
    CHECK(gauss.analytic_score(v1(2.0), TimeSeries({1.0, 2.0}))(0) == 0.0);
    CHECK(gauss.analytic_score(v1(0.8), TimeSeries({1.0, 2.0, 1.0}))(0) == doctest::Approx(0.0));
    CHECK(gauss.score_information(v1(0.3), TimeSeries({1.0, 2.0, 1.0}))(0, 0) == doctest::Approx(5.0));

    BinaryMarkov bin;
    const TimeSeries y({0, 1, 1, 0, 0, 0, 1, 0, 1, 1});
    auto loglik = [&](double th) {
      double s = 0.0;
      for (std::size_t j = 1; j < y.size(); ++j) {
        const double p = BinaryMarkov::prob_one(th, y[j - 1]);
        s += y[j] == 1.0 ? std::log(p) : std::log(1.0 - p);
      }
      return s;
    };
    const double h = 1e-6;
    const double fd = (loglik(0.5 + h) - loglik(0.5 - h)) / (2 * h);
    const double score = bin.analytic_score(v1(0.5), y)(0);
    CHECK(score == doctest::Approx(fd).epsilon(1e-7));
    // every step contributes +-2 at theta = 1/2
    CHECK(std::abs(std::fmod(std::abs(score), 2.0)) < 1e-12);

    StableAR1 stable(1.5);
    CHECK(code_of([&] { stable.analytic_score(v1(0.5), y); }) == ErrorCode::NotAvailable);
  }

  TEST_CASE("stable information factor") {
    CHECK(stable_information_factor(1e-7, 2.0) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(std::abs(stable_information_factor(0.5384, 1.5) - 0.391) <= 1e-3);
    CHECK(std::abs(stable_information_factor(0.7968, 1.0) - 0.324) <= 1e-3);
    // factor - [2^{1-a} t^{2-a} + 2^{1-a}(2^{a-1} - 2) t^2] = o(t^2)
    const double a = 1.3;
    auto remainder = [&](double t) {
      const double lead = std::pow(2.0, 1 - a) * std::pow(t, 2 - a) +
                          std::pow(2.0, 1 - a) * (std::pow(2.0, a - 1) - 2.0) * t * t;
      return std::abs(stable_information_factor(t, a) - lead) / (t * t);
    };
    CHECK(remainder(1e-2) < 0.1);
    CHECK(remainder(1e-3) < remainder(1e-2));
  }

  TEST_CASE("closed-form quasi-score brackets the true phi") {
    StableAR1 stable(1.5);
    const auto y = stable.simulate({v1(0.6), 5000, 3});
    const double t = stable_optimal_point(1.5).t;
    CHECK(stable_closed_form_quasiscore(0.5, 1.5, t, y) > 0.0);
    CHECK(stable_closed_form_quasiscore(0.7, 1.5, t, y) < 0.0);
  }

  TEST_CASE("factory") {
    for (auto name : {"stable-ar1", "gar1", "gaussian-ar1", "binary-markov"}) {
      const auto id = parse_model_id(name);
      REQUIRE(id.has_value());
      CHECK(make_model(*id)->name() == name);
      CHECK(to_string(*id) == name);
    }
    CHECK_FALSE(parse_model_id("arma").has_value());
  }
}
