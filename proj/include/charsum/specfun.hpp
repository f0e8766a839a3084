#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

namespace charsum {

/// Standard normal CDF.
double gauss_cdf(double x);

/// P(a <= X <= b) for standard normal X, computed from whichever tail keeps
/// the subtraction well conditioned.
double gauss_interval_prob(double a, double b);

/// Axis-parallel closed rectangle [a,b] x [c,d].
class Rectangle {
 public:
  Rectangle(double a, double b, double c, double d);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }
  /// Lebesgue measure.
  double area() const { return (b_ - a_) * (d_ - c_); }
  bool contains(double x, double y) const { return x >= a_ && x <= b_ && y >= c_ && y <= d_; }

 private:
  double a_, b_, c_, d_;
};

/// Standard bivariate Gaussian mass of R; the density factorizes.
double gauss_rect_prob(const Rectangle& r);

/// Bessel J0: power series (long double) for |x| <= 16, Hankel asymptotic
/// expansion beyond.
double bessel_j0(double x);

/// J0(x) - 1 without cancellation for small |x|.
double bessel_j0_minus_one(double x);

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(std::size_t n);

/// Nodes and weights mapped to [lo, hi].
GaussRule gauss_legendre(std::size_t n, double lo, double hi);

template <class V>
struct IntegrationResult {
  V value{};
  double abs_error = 0.0;
  std::size_t panels = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-9;
  std::size_t max_panels = std::size_t{1} << 14;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::fabs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class V>
struct Panel {
  double lo, hi;
  V value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class V, class BatchFn>
Panel<V> kronrod_panel(const BatchFn& f, double lo, double hi, std::vector<double>& xs,
                       std::vector<V>& ys) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  xs.resize(15);
  ys.assign(15, V{});
  for (int i = 0; i < 7; ++i) {
    xs[2 * i] = mid - half * kKronrodNodes[i];
    xs[2 * i + 1] = mid + half * kKronrodNodes[i];
  }
  xs[14] = mid;
  f(std::span<const double>(xs), std::span<V>(ys));
  V kronrod = ys[14] * kKronrodWeights[7];
  V gauss = ys[14] * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const V pair = ys[2 * i] + ys[2 * i + 1];
    kronrod += pair * kKronrodWeights[i];
    if (i % 2 == 1) gauss += pair * kGaussWeights[i / 2];
  }
  kronrod *= half;
  gauss *= half;
  return {lo, hi, kronrod, magnitude(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature. The integrand is called
/// with all 15 abscissae of a panel at once: f(span<const double> x, span<V> out).
/// The panel with the largest |K15 - G7| is bisected until the summed estimate
/// is below abs_tol or max_panels is reached (then converged = false).
template <class V, class BatchFn>
IntegrationResult<V> integrate_batched(const BatchFn& f, double lo, double hi,
                                       const QuadratureOptions& opts = {}) {
  IntegrationResult<V> res;
  if (lo == hi) {
    res.converged = true;
    return res;
  }
  std::vector<double> xs;
  std::vector<V> ys;
  std::priority_queue<detail::Panel<V>> heap;
  heap.push(detail::kronrod_panel<V>(f, lo, hi, xs, ys));
  res.evaluations = 15;
  double total_error = heap.top().error;
  while (total_error > opts.abs_tol && heap.size() < opts.max_panels) {
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) break;  // panel cannot be split further
    heap.pop();
    auto left = detail::kronrod_panel<V>(f, worst.lo, mid, xs, ys);
    auto right = detail::kronrod_panel<V>(f, mid, worst.hi, xs, ys);
    res.evaluations += 30;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed drift in the running error total.
  total_error = 0.0;
  V value{};
  std::vector<detail::Panel<V>> panels;
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const auto& x, const auto& y) { return x.lo < y.lo; });
  for (const auto& p : panels) {
    value += p.value;
    total_error += p.error;
  }
  res.value = value;
  res.abs_error = total_error;
  res.panels = panels.size();
  res.converged = total_error <= opts.abs_tol;
  return res;
}

/// Scalar convenience wrapper.
template <class V, class Fn>
IntegrationResult<V> integrate(const Fn& f, double lo, double hi,
                               const QuadratureOptions& opts = {}) {
  auto batch = [&](std::span<const double> x, std::span<V> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
  };
  return integrate_batched<V>(batch, lo, hi, opts);
}

}  // namespace charsum
