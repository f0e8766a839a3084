#include <cmath>
#include <numbers>

#include "charsum/errors.hpp"
#include "charsum/modarith.hpp"
#include "charsum/random.hpp"
#include "charsum/selberg.hpp"
#include "doctest.h"

using namespace charsum;

namespace {

constexpr double kPi = std::numbers::pi;

double naive_G(double u) { return 2.0 * u / kPi + 2.0 * (1.0 - u) * u / std::tan(kPi * u); }

}  // namespace

TEST_CASE("G at the reference points and its range") {
  CHECK(std::fabs(selberg_G(0.5) - 1.0 / kPi) <= 1e-16);
  CHECK(selberg_G(0.0) == 2.0 / kPi);
  CHECK(std::fabs(selberg_G(1.0)) <= 1e-17);
  for (int i = 0; i <= 10000; ++i) {
    const double g = selberg_G(i / 10000.0);
    CHECK(g >= 0.0);
    CHECK(g <= 2.0 / kPi + 1e-16);
  }
  for (double u : {0.01, 0.1, 0.3, 0.7, 0.9, 0.99}) CHECK(std::fabs(selberg_G(u) - naive_G(u)) <= 1e-14);
  // Continuity across the series switch points.
  for (double w : {1e-3, 1.0 - 1e-3}) {
    CHECK(std::fabs(selberg_G(w * (1 - 1e-12)) - selberg_G(w * (1 + 1e-12))) <= 1e-13);
  }
  CHECK_THROWS_AS(selberg_G(-0.01), PreconditionError);
  CHECK_THROWS_AS(selberg_G(1.01), PreconditionError);
}

TEST_CASE("f_ab") {
  CHECK(f_ab(0.3, 1.7, 0.0) == std::complex<double>(0.0, 0.0));
  CounterRng rng(5, 0);
  for (int i = 0; i < 200; ++i) {
    const double a = 6 * rng.uniform() - 3, b = a + 3 * rng.uniform() + 1e-3, u = 2 * rng.uniform();
    CHECK(std::abs(f_ab(a, b, u)) <= kPi * u * (b - a) + 1e-15);
    CHECK(std::abs(f_ab_over_u(a, b, u) * u - f_ab(a, b, u)) <= 1e-14);
    CHECK(std::abs(f_ab(-b, b, u) - std::complex<double>(0.0, std::sin(2 * kPi * b * u))) <= 1e-15);
    // Im(w1) Im(w2) = Re(w1 conj(w2) - w1 w2) / 2
    const std::complex<double> w1(rng.uniform() - 0.5, rng.uniform() - 0.5), w2(rng.uniform(), rng.uniform() - 0.5);
    CHECK(std::fabs(w1.imag() * w2.imag() - 0.5 * (w1 * std::conj(w2) - w1 * w2).real()) <= 1e-16);
  }
  CHECK(std::abs(f_ab(0, 1, 0.3)) <= kPi * 0.3);
  CHECK(f_ab_over_u(-1.0, 2.0, 0.0) == std::complex<double>(0.0, 3.0 * kPi));
}

TEST_CASE("signum approximation") {
  CHECK(sgn_approx(0.0, 5.0) == 0.0);
  CHECK(std::fabs(sgn_approx(1.0, 10.0) - 1.0) <= 2.0 * std::pow(1.0 / (10.0 * kPi), 2));
  for (double x : {0.05, 0.4, 2.3}) CHECK(sgn_approx(-x, 7.0) == doctest::Approx(-sgn_approx(x, 7.0)).epsilon(1e-12));
}

TEST_CASE("indicator approximation is the signum combination") {
  CounterRng rng(11, 0);
  for (int i = 0; i < 100; ++i) {
    const double a = 4 * rng.uniform() - 2, b = a + 2 * rng.uniform() + 0.01;
    const double x = 6 * rng.uniform() - 3, t = 1 + 9 * rng.uniform();
    const double lhs = indicator_approx(x, a, b, t);
    const double rhs = 0.5 * (sgn_approx(x - a, t) - sgn_approx(x - b, t));
    CHECK(std::fabs(lhs - rhs) <= 1e-8);
  }
  CHECK(std::fabs(indicator_approx(0.0, -2.0, 2.0, 30.0) - 1.0) <= 2 * 2 * std::pow(1 / (60 * kPi), 2));
  CHECK(std::fabs(indicator_approx(5.0, -1.0, 1.0, 30.0)) <= 2 * 2 * std::pow(1 / (120 * kPi), 2));
  CHECK_THROWS_AS(indicator_approx(0.0, 1.0, 1.0, 3.0), PreconditionError);
}

TEST_CASE("Gaussian-smoothed interval converges like 1/t") {
  CHECK(std::fabs(gaussian_smoothed_interval(-1.0, 1.0, 20.0) - 0.682689492137086) <= 5.0 / 20.0);
  CHECK(std::fabs(gaussian_smoothed_interval(-8.0, 8.0, 40.0) - 1.0) <= 5.0 / 40.0);
  CounterRng rng(3, 0);
  double err5 = 0.0, err40 = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double a = 6 * rng.uniform() - 3, b = a + (3 - a) * rng.uniform() + 1e-3;
    const double exact = gauss_interval_prob(a, b);
    err5 += std::fabs(gaussian_smoothed_interval(a, b, 5.0) - exact);
    err40 += std::fabs(gaussian_smoothed_interval(a, b, 40.0) - exact);
  }
  CHECK(err40 < err5);
}

TEST_CASE("Fejer identity") {
  CHECK(fejer_kernel(0.0, 3.0) == 1.0);
  CHECK(fejer_kernel(0.5, 2.0) <= 1e-30);
  CHECK(fejer_identity_check(0.5, 2.0) <= 1e-9);
  CHECK(fejer_identity_check(0.0, 2.0) <= 1e-9);
  CounterRng rng(8, 0);
  for (int i = 0; i < 50; ++i) {
    CHECK(fejer_identity_check(10 * rng.uniform() - 5, 0.1 + 20 * rng.uniform()) <= 1e-9);
  }
}

TEST_CASE("Fejer error term through the characteristic function equals the direct average") {
  const auto ctx = std::make_shared<const PrimeContext>(PrimeContext::create(10007));
  auto series = std::make_shared<const NormalizedSeries>(materialize(WindowSource(Character(ctx, 1), 50)));
  const EmpiricalCf cf(series);
  for (double t : {0.5, 2.0}) {
    for (double l : {-1.0, 0.0, 0.7}) {
      CHECK(std::fabs(fejer_error_term(cf, t, l, Axis::real) - fejer_direct(*series, t, l, Axis::real)) <= 1e-6);
      CHECK(std::fabs(fejer_error_term(cf, t, l, Axis::imag) - fejer_direct(*series, t, l, Axis::imag)) <= 1e-6);
    }
  }
}

TEST_CASE("smoothed rectangle frequency") {
  const GaussianCf g;
  SUBCASE("Gaussian characteristic function reproduces the Gaussian mass") {
    for (double t : {4.0, 8.0}) {
      const Rectangle R(-1, 1, -0.5, 2);
      CHECK(std::fabs(smoothed_rect_frequency(g, R, t, 128) - gauss_rect_prob(R)) <= 5.0 / t);
    }
  }
  SUBCASE("thin rectangles carry vanishing mass") {
    const Rectangle R(0.0, 1e-6, 0.0, 1e-6);
    CHECK(std::fabs(smoothed_rect_frequency(g, R, 4.0)) <= kPi * kPi * R.area() * 16.0);
  }
  SUBCASE("data provider agrees with the Gaussian reference at large H") {
    const auto ctx = std::make_shared<const PrimeContext>(PrimeContext::create(10007));
    auto series = std::make_shared<const NormalizedSeries>(materialize(WindowSource(Character(ctx, 1), 50)));
    const EmpiricalCf cf(series);
    const Rectangle R(-1, 1, -1, 1);
    const double via_contract = smoothed_rect_frequency(cf, R, 1.0);
    const double via_default = smoothed_rect_frequency(static_cast<const CfProvider&>(g), R, 1.0);
    CHECK(std::fabs(via_contract - via_default) <= 0.05);
  }
  CHECK_THROWS_AS(smoothed_rect_frequency(g, Rectangle(0, 1, 0, 1), 1.0, 20), PreconditionError);
}

TEST_CASE("preset smoothing parameter") {
  const auto p = paper_preset_t_N(1000003, 100);
  CHECK(p.t == doctest::Approx(std::sqrt(std::log(1000003.0) / std::log(100.0)) / (60 * kPi)));
  CHECK(p.N == 0);
  const auto big = paper_preset_t_N(10000019, 2);
  CHECK(big.t == doctest::Approx(std::sqrt(std::log(10000019.0) / std::log(2.0)) / (60 * kPi)));
}
