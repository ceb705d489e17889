#include <doctest.h>

#include <cmath>

#include "tmef/error.hpp"
#include "tmef/models/binary_markov.hpp"
#include "tmef/models/gamma_ar1.hpp"
#include "tmef/models/gaussian_ar1.hpp"
#include "tmef/models/stable_ar1.hpp"
#include "tmef/selection.hpp"

using namespace tmef;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }

}  // namespace

TEST_SUITE("selection") {
  TEST_CASE("stable single point matches the factor maximizer") {
    for (auto [alpha, expected] : {std::pair{1.9, 0.3852}, std::pair{0.8, 1.1022}, std::pair{1.3, 0.6087}}) {
      StableAR1 stable(alpha);
      const auto y = stable.simulate({v1(0.6), 300, 7});
      SelectionConfig cfg;
      const auto opt = maximize_information_1d(stable, KernelFamily::CfReal, {}, v1(0.6), y, cfg);
      CHECK(opt.status == OptimumStatus::Interior);
      CHECK(std::abs(opt.t - expected) <= 5e-3);
      CHECK(std::abs(opt.t - stable_optimal_point(alpha).t) <= 1e-6);
    }
  }

  TEST_CASE("gaussian stable case has no interior maximum") {
    StableAR1 stable(2.0);
    const auto y = stable.simulate({v1(0.6), 300, 7});
    const auto opt = maximize_information_1d(stable, KernelFamily::CfReal, {}, v1(0.6), y, SelectionConfig{});
    CHECK(opt.status == OptimumStatus::NoInteriorMaximum);
    CHECK(opt.t == doctest::Approx(default_window(KernelFamily::CfReal).lo));
  }

  TEST_CASE("binary markov stops after one point") {
    BinaryMarkov bin;
    const auto y = bin.simulate({v1(0.3), 400, 2});
    SelectionConfig cfg;
    cfg.k_max = 3;
    const auto sel = greedy_select(bin, KernelFamily::Pgf, v1(0.3), y, cfg);
    CHECK(sel.points.size() == 1);
    REQUIRE(sel.rejected.has_value());
    CHECK(sel.rejected->k == 2);
    CHECK(sel.rejected->info - sel.trace[0].info < cfg.rel_gain_tol * sel.trace[0].info);
  }

  TEST_CASE("uniform spacing") {
    GaussianAR1 gauss;
    const auto y = gauss.simulate({v1(0.3), 100, 1});
    SelectionConfig cfg;
    cfg.k_max = 3;
    cfg.mode = SelectionMode::UniformSpacing;
    cfg.window = SearchWindow{0.2, 1.4};
    const auto sel = greedy_select(gauss, KernelFamily::CfReal, v1(0.3), y, cfg);
    REQUIRE(sel.points.size() == 3);
    CHECK(sel.points.points()[0] == doctest::Approx(0.2));
    CHECK(sel.points.points()[1] == doctest::Approx(0.8));
    CHECK(sel.points.points()[2] == doctest::Approx(1.4));
  }

  TEST_CASE("moment selection is the first k orders") {
    GammaAR1 gar;
    const Vector th{{1.0, 2.0, 3.0}};
    const auto y = gar.simulate({th, 300, 3});
    SelectionConfig cfg;
    cfg.k_max = 3;
    const auto sel = greedy_select(gar, KernelFamily::Moment, th, y, cfg);
    CHECK(sel.points.points() == std::vector<double>{1.0, 2.0, 3.0});
  }

  TEST_CASE("greedy trace is monotone and improves stable efficiency") {
    StableAR1 stable(1.5);
    const auto y = stable.simulate({v1(0.6), 500, 9});
    SelectionConfig cfg;
    cfg.k_max = 3;
    const auto sel = greedy_select(stable, KernelFamily::CfReal, v1(0.6), y, cfg);
    REQUIRE(sel.trace.size() >= 2);
    for (std::size_t i = 1; i < sel.trace.size(); ++i) CHECK(sel.trace[i].info > sel.trace[i - 1].info);
    double s2 = 0.0;
    for (std::size_t j = 1; j < y.size(); ++j) s2 += y[j - 1] * y[j - 1];
    CHECK(sel.trace.back().info / s2 / 0.428 > 0.913);

    GammaAR1 gar;
    const Vector th{{1.0, 2.0, 3.0}};
    const auto yg = gar.simulate({th, 300, 5});
    for (KernelFamily f : {KernelFamily::Laplace, KernelFamily::Mgf, KernelFamily::Pgf, KernelFamily::CfReal}) {
      const auto s = greedy_select(gar, f, th, yg, cfg);
      for (std::size_t i = 1; i < s.trace.size(); ++i)
        CHECK(s.trace[i].info >= s.trace[i - 1].info * (1 - 1e-10));
    }
  }

  TEST_CASE("selection is stable under grid refinement") {
    GammaAR1 gar;
    const Vector th{{1.0, 2.0, 3.0}};
    const auto y = gar.simulate({th, 300, 6});
    SelectionConfig a;
    a.k_max = 2;
    SelectionConfig b = a;
    b.grid_resolution = 2 * a.grid_resolution;
    const auto sa = greedy_select(gar, KernelFamily::Laplace, th, y, a);
    const auto sb = greedy_select(gar, KernelFamily::Laplace, th, y, b);
    REQUIRE(sa.points.size() == sb.points.size());
    for (std::size_t i = 0; i < sa.points.size(); ++i)
      CHECK(std::abs(sa.points.points()[i] - sb.points.points()[i]) < 1e-3);
  }

  TEST_CASE("candidate information rejects inadmissible points") {
    GaussianAR1 gauss;
    const auto y = gauss.simulate({v1(0.3), 100, 1});
    CHECK_FALSE(candidate_information(gauss, KernelFamily::Mgf, {}, 0.0, v1(0.3), y).has_value());
    CHECK_FALSE(candidate_information(gauss, KernelFamily::Mgf, {0.5}, 0.5, v1(0.3), y).has_value());
    CHECK(candidate_information(gauss, KernelFamily::Mgf, {0.5}, 0.6, v1(0.3), y).has_value());
  }

  TEST_CASE("two-step iteration") {
    GaussianAR1 gauss;
    const auto y = gauss.simulate({v1(0.5), 500, 2});
    SelectionConfig cfg;
    const auto r = two_step_iterate(gauss, KernelFamily::Moment, v1(0.0), y, cfg);
    CHECK(r.converged);
    CHECK(r.iterations == 1);
    double s11 = 0.0, s20 = 0.0;
    for (std::size_t j = 1; j < y.size(); ++j) {
      s11 += y[j - 1] * y[j];
      s20 += y[j - 1] * y[j - 1];
    }
    CHECK(r.theta(0) == doctest::Approx(s11 / s20).epsilon(1e-10));

    StableAR1 stable(1.5);
    const auto ys = stable.simulate({v1(0.6), 1000, 4});
    const auto rs = two_step_iterate(stable, KernelFamily::CfReal, v1(0.55), ys, cfg);
    CHECK(rs.converged);
    REQUIRE(rs.points.has_value());
    CHECK(rs.points->points()[0] == doctest::Approx(stable_optimal_point(1.5).t).epsilon(1e-6));
    CHECK(rs.iterations <= 3);

    GammaAR1 gar;
    const Vector th{{1.0, 2.0, 3.0}};
    const auto yg = gar.simulate({th, 400, 8});
    SelectionConfig gc;
    gc.k_max = 2;
    const auto g1 = two_step_iterate(gar, KernelFamily::Laplace, th, yg, gc);
    const auto g2 = two_step_iterate(gar, KernelFamily::Laplace, th, yg, gc);
    CHECK(g1.iterations == g2.iterations);
    CHECK(g1.theta == g2.theta);
  }
}
