#include "charsum/specfun.hpp"

#include <numbers>

#include "charsum/errors.hpp"

namespace charsum {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

double gauss_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double gauss_interval_prob(double a, double b) {
  if (!(a <= b)) return 0.0;
  if (a >= 0.0) return 0.5 * (std::erfc(a * kInvSqrt2) - std::erfc(b * kInvSqrt2));
  if (b <= 0.0) return 0.5 * (std::erfc(-b * kInvSqrt2) - std::erfc(-a * kInvSqrt2));
  return 1.0 - 0.5 * std::erfc(-a * kInvSqrt2) - 0.5 * std::erfc(b * kInvSqrt2);
}

Rectangle::Rectangle(double a, double b, double c, double d) : a_(a), b_(b), c_(c), d_(d) {
  if (!(a < b) || !(c < d)) throw PreconditionError("Rectangle requires a < b and c < d");
}

double gauss_rect_prob(const Rectangle& r) {
  return gauss_interval_prob(r.a(), r.b()) * gauss_interval_prob(r.c(), r.d());
}

namespace {

// sum_{k >= first} (-1)^k (x^2/4)^k / (k!)^2
long double j0_series(long double x, int first) {
  const long double y = x * x / 4.0L;
  long double term = 1.0L;
  for (int k = 1; k <= first; ++k) term *= -y / (static_cast<long double>(k) * k);
  long double sum = 0.0L;
  for (int k = first; k < 200; ++k) {
    sum += term;
    if (std::fabs(term) < 1e-22L * std::max(1.0L, std::fabs(sum)) && k > first) break;
    term *= -y / (static_cast<long double>(k + 1) * (k + 1));
  }
  return sum;
}

double j0_hankel(double x) {
  // J0(x) ~ sqrt(2/(pi x)) (P cos w - Q sin w), w = x - pi/4.
  long double p = 0.0L, q = 0.0L;
  long double a = 1.0L;  // a_k(0) / x^k with sign folded in below
  long double prev = INFINITY;
  const long double z = x;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) a *= -static_cast<long double>((2 * k - 1) * (2 * k - 1)) / (8.0L * k * z);
    const long double mag = std::fabs(a);
    if (mag > prev) break;  // asymptotic series starts to diverge
    prev = mag;
    // P takes (-1)^{k/2} a_{2k'}, Q takes (-1)^{(k-1)/2} a_{2k'+1}
    if (k % 2 == 0) {
      p += ((k / 2) % 2 == 0 ? a : -a);
    } else {
      q += (((k - 1) / 2) % 2 == 0 ? a : -a);
    }
    if (mag < 1e-20L) break;
  }
  const double s = std::sin(x), c = std::cos(x);
  const double cos_w = (c + s) * kInvSqrt2;
  const double sin_w = (s - c) * kInvSqrt2;
  const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
  return amp * static_cast<double>(p * cos_w - q * sin_w);
}

}  // namespace

double bessel_j0(double x) {
  x = std::fabs(x);
  if (x <= 16.0) return static_cast<double>(j0_series(x, 0));
  return j0_hankel(x);
}

double bessel_j0_minus_one(double x) {
  x = std::fabs(x);
  if (x <= 2.0) return static_cast<double>(j0_series(x, 1));
  return bessel_j0(x) - 1.0;
}

GaussRule gauss_legendre(std::size_t n) {
  if (n == 0) throw PreconditionError("gauss_legendre: n must be positive");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
    long double dp = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1.0L, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0L;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0L);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    long double p0 = 1.0L, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0L;
    dp = n * (x * p1 - p0) / (x * x - 1.0L);
    const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
    rule.nodes[i] = -static_cast<double>(x);
    rule.nodes[n - 1 - i] = static_cast<double>(x);
    rule.weights[i] = rule.weights[n - 1 - i] = static_cast<double>(w);
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

GaussRule gauss_legendre(std::size_t n, double lo, double hi) {
  auto rule = gauss_legendre(n);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

}  // namespace charsum
