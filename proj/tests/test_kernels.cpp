#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tmef/error.hpp"
#include "tmef/kernels.hpp"

using namespace tmef;

namespace {

double part_value(CfPart part, double index, double y) {
  return part == CfPart::Cos ? std::cos(index * y) : std::sin(index * y);
}

double expand(const CfExpansion& e, double y) {
  double s = 0.0;
  for (const auto& term : e) s += term.weight * part_value(term.part, term.index, y);
  return s;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("eval examples") {
    CHECK_THROWS_AS(eval(KernelFamily::Mgf, 0.0, 5.0), Error);
    try {
      eval(KernelFamily::Mgf, 0.0, 5.0);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IndexOutOfDomain);
    }
    CHECK(eval(KernelFamily::Pgf, 0.5, 3.0).re == doctest::Approx(0.125).epsilon(1e-15));
    const auto cf = eval(KernelFamily::CfReal, std::numbers::pi, 1.0);
    CHECK(cf.re == doctest::Approx(-1.0));
    CHECK(std::abs(cf.im) < 1e-15);
    CHECK(eval(KernelFamily::Moment, 2.0, 3.0).re == 9.0);
    CHECK(eval(KernelFamily::Laplace, 1.0, 2.0).re == doctest::Approx(std::exp(-2.0)));
  }

  TEST_CASE("degenerate and inadmissible indices") {
    CHECK_FALSE(in_index_domain(KernelFamily::Pgf, 1.0));
    CHECK_FALSE(in_index_domain(KernelFamily::Pgf, -0.5));
    CHECK_FALSE(in_index_domain(KernelFamily::CfReal, 0.0));
    CHECK_FALSE(in_index_domain(KernelFamily::Laplace, 0.0));
    CHECK_FALSE(in_index_domain(KernelFamily::Moment, 1.5));
    CHECK_FALSE(in_index_domain(KernelFamily::Moment, 0.0));
    CHECK(in_index_domain(KernelFamily::Moment, 3.0));
    CHECK(in_index_domain(KernelFamily::Mgf, -0.3));
  }

  TEST_CASE("overflow is reported") {
    try {
      eval(KernelFamily::Mgf, 1.0, 1e4);
      FAIL("expected overflow");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Overflow);
    }
  }

  TEST_CASE("mult_rule examples") {
    CHECK(mult_rule(KernelFamily::Mgf, 0.2, 0.3) == doctest::Approx(0.5));
    CHECK(mult_rule(KernelFamily::Pgf, 0.5, 0.4) == doctest::Approx(0.2));
    CHECK(mult_rule(KernelFamily::Moment, 2, 3) == 5.0);
    try {
      mult_rule(KernelFamily::CfReal, 1.0, 2.0);
      FAIL("expected Unsupported");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Unsupported);
    }
  }

  TEST_CASE("closure identity") {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.05, 0.95), yv(0.0, 6.0);
    for (auto family : {KernelFamily::Mgf, KernelFamily::Laplace, KernelFamily::Pgf}) {
      for (int i = 0; i < 500; ++i) {
        const double t = u(gen), s = u(gen), y = yv(gen);
        const double lhs = eval(family, mult_rule(family, t, s), y).re;
        const double rhs = eval(family, t, y).re * eval(family, s, y).re;
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
      }
    }
    for (int t = 1; t <= 4; ++t) {
      for (int s = 1; s <= 4; ++s) {
        const double y = 1.7;
        const double lhs = eval(KernelFamily::Moment, mult_rule(KernelFamily::Moment, t, s), y).re;
        const double rhs = std::pow(y, t) * std::pow(y, s);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
      }
    }
  }

  TEST_CASE("cf pair lies on the unit circle") {
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
      double t = u(gen);
      if (t == 0.0) t = 1.0;
      const auto v = eval(KernelFamily::CfReal, t, u(gen));
      CHECK(std::abs(v.re * v.re + v.im * v.im - 1.0) < 1e-12);
    }
  }

  TEST_CASE("cf product-to-sum examples") {
    const auto p11 = cf_product_indices(1.0, 1.0);
    const auto p21 = cf_product_indices(2.0, 1.0);
    const auto p13 = cf_product_indices(1.0, 3.0);
    for (double y : {-2.0, 0.3, 1.0, 4.5}) {
      CHECK(expand(p11.cos_cos, y) == doctest::Approx(0.5 * (1.0 + std::cos(2 * y))));
      CHECK(expand(p21.sin_sin, y) == doctest::Approx(0.5 * (std::cos(y) - std::cos(3 * y))));
      CHECK(expand(p13.sin_cos, y) == doctest::Approx(0.5 * (std::sin(-2 * y) + std::sin(4 * y))));
    }
    CHECK(p11.cos_cos[0].index == 0.0);
    CHECK(p13.sin_cos[0].index == -2.0);
    CHECK_THROWS_AS(cf_product_indices(0.0, 1.0), Error);
  }

  TEST_CASE("cf product identities at random points") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
      const double t = u(gen), s = u(gen), y = u(gen);
      for (auto a : {CfPart::Cos, CfPart::Sin}) {
        for (auto b : {CfPart::Cos, CfPart::Sin}) {
          const double direct = part_value(a, t, y) * part_value(b, s, y);
          CHECK(std::abs(expand(cf_product(a, t, b, s), y) - direct) < 1e-12);
        }
      }
    }
  }

  TEST_CASE("family names round trip") {
    for (auto f : {KernelFamily::CfReal, KernelFamily::Mgf, KernelFamily::Pgf, KernelFamily::Laplace,
                   KernelFamily::Moment}) {
      CHECK(parse_kernel_family(to_string(f)) == f);
    }
    CHECK_FALSE(parse_kernel_family("fourier").has_value());
  }
}
