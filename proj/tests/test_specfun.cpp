#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "charsum/errors.hpp"
#include "charsum/specfun.hpp"
#include "doctest.h"

using namespace charsum;

TEST_CASE("standard normal CDF reference values") {
  CHECK(gauss_cdf(0.0) == 0.5);
  CHECK(std::fabs(gauss_cdf(1.0) - gauss_cdf(-1.0) - 0.682689492137086) <= 1e-14);
  CHECK(std::fabs(gauss_cdf(1.959963984540054) - 0.975) <= 1e-14);
  CHECK(std::fabs(gauss_cdf(-5.0) - 2.866515718791939e-07) <= 1e-20);
  CHECK(std::fabs(gauss_interval_prob(-1.0, 1.0) - 0.682689492137086) <= 1e-14);
  // Far tail: Phi(9) - Phi(8) = Q(8) - Q(9)
  CHECK(std::fabs(gauss_interval_prob(8.0, 9.0) / 6.219831985865830e-16 - 1.0) <= 1e-10);
  CHECK(gauss_interval_prob(-40.0, 40.0) == 1.0);
}

TEST_CASE("rectangles") {
  const Rectangle r(-1, 1, 0, 2);
  CHECK(r.area() == 4.0);
  CHECK(r.contains(1.0, 2.0));
  CHECK(r.contains(-1.0, 0.0));
  CHECK_FALSE(r.contains(1.0000001, 1.0));
  CHECK(gauss_rect_prob(r) == doctest::Approx(0.682689492137086 * (gauss_cdf(2.0) - 0.5)));
  CHECK_THROWS_AS(Rectangle(1, 1, 0, 1), PreconditionError);
}

TEST_CASE("J0 against the standard library") {
  for (double x = 0.0; x <= 60.0; x += 0.0625) {
    CHECK_MESSAGE(std::fabs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)) <= 2e-14, "x=" << x);
  }
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(bessel_j0(-3.0) == bessel_j0(3.0));
  for (double x : {1e-8, 1e-5, 1e-3, 0.1, 1.0, 1.9}) {
    // sum_{k>=1} (-x^2/4)^k / (k!)^2, summed smallest term first
    std::vector<long double> terms;
    long double term = 1.0L;
    for (int k = 1; k < 30; ++k) {
      term *= -static_cast<long double>(x) * x / 4.0L / (static_cast<long double>(k) * k);
      terms.push_back(term);
    }
    long double series = 0.0L;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) series += *it;
    CHECK_MESSAGE(std::fabs(bessel_j0_minus_one(x) - static_cast<double>(series)) <= 4e-16 * std::fabs(static_cast<double>(series)),
                  "x=" << x);
  }
}

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly") {
  for (std::size_t n : {1u, 2u, 5u, 16u, 64u}) {
    const auto g = gauss_legendre(n, 0.0, 2.0);
    for (std::size_t p = 0; p < 2 * n; p += 1 + n / 4) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], static_cast<double>(p));
      const double exact = std::pow(2.0, static_cast<double>(p + 1)) / static_cast<double>(p + 1);
      CHECK(std::fabs(s - exact) <= 1e-12 * exact);
    }
  }
}

TEST_CASE("adaptive Gauss-Kronrod") {
  const auto r = integrate<double>([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(r.converged);
  CHECK(std::fabs(r.value - 2.0) <= 1e-12);
  const auto osc = integrate<double>([](double x) { return std::cos(200.0 * x); }, 0.0, 1.0);
  CHECK(std::fabs(osc.value - std::sin(200.0) / 200.0) <= 1e-9);
  const auto c = integrate<std::complex<double>>([](double x) { return std::polar(1.0, x); }, 0.0,
                                                 std::numbers::pi / 2);
  CHECK(std::abs(c.value - std::complex<double>(1.0, 1.0)) <= 1e-12);
  QuadratureOptions tight;
  tight.abs_tol = 1e-15;
  tight.max_panels = 2;
  const auto bad = integrate<double>([](double x) { return std::sqrt(x); }, 0.0, 1.0, tight);
  CHECK_FALSE(bad.converged);
}
