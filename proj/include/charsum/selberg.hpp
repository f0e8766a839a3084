#pragma once

/**
 * @file selberg.hpp
 * @brief Selberg's band-limited approximations to signum and interval
 * indicators, the Gaussian-smoothed interval integral, the Fejer kernel
 * identity and the Fejer error terms of an empirical characteristic function.
 */

#include <complex>
#include <cstdint>

#include "charsum/charfn.hpp"
#include "charsum/specfun.hpp"

namespace charsum {

/// G(u) = 2u/pi + 2(1-u) u cot(pi u) on [0,1], with G(0) = 2/pi and G(1) = 0.
/// Throws PreconditionError outside [0,1].
double selberg_G(double u);

/// f_{alpha,beta}(u) = (exp(-2 pi i alpha u) - exp(-2 pi i beta u)) / 2.
std::complex<double> f_ab(double alpha, double beta, double u);

/// f_{alpha,beta}(u) / u with the removable singularity at u = 0 filled in.
std::complex<double> f_ab_over_u(double alpha, double beta, double u);

/// int_0^t G(u/t) sin(2 pi u x) du/u. Throws QuadratureError on non-convergence.
double sgn_approx(double x, double t, const QuadratureOptions& opts = {});

/// Im int_0^t G(u/t) exp(2 pi i u x) f_{alpha,beta}(u) du/u.
double indicator_approx(double x, double alpha, double beta, double t,
                        const QuadratureOptions& opts = {});

/// Im int_0^t G(u/t) exp(-(2 pi u)^2 / 2) f_{a,b}(u) du/u, an approximation
/// to the standard normal mass of [a,b] with O(1/t) error.
double gaussian_smoothed_interval(double a, double b, double t, const QuadratureOptions& opts = {});

/// (sin(pi t x) / (pi t x))^2, equal to 1 at x = 0.
double fejer_kernel(double x, double t);

/// |fejer_kernel(x,t) - (2/t^2) int_0^t (t-v) cos(2 pi x v) dv|.
double fejer_identity_check(double x, double t, const QuadratureOptions& opts = {});

enum class Axis { real, imag };

/// Re int_0^t 2(t-v)/t^2 exp(-2 pi i v l) Phi(2 pi v, 0) dv (Axis::real), or with
/// Phi(0, 2 pi v) (Axis::imag): the average Fejer kernel of the component
/// minus l, obtained from the characteristic function.
double fejer_error_term(const CfProvider& cf, double t, double l, Axis axis,
                        const QuadratureOptions& opts = {});

/// Direct average (1/q) sum_x fejer_kernel(component(x) - l, t).
template <class Source>
double fejer_direct(const Source& source, double t, double l, Axis axis, unsigned threads = 1) {
  struct Sink {
    double t, l;
    Axis axis;
    using partial_type = DoubleDouble;
    partial_type init() const { return {}; }
    void consume(partial_type& acc, const SeriesBlock& b) const {
      const auto& xs = axis == Axis::real ? b.re : b.im;
      for (double x : xs) acc.add(fejer_kernel(x - l, t));
    }
    void merge(partial_type& a, const partial_type& b) const { a.add(b); }
  };
  const auto acc = reduce_series(source, Sink{t, l, axis}, threads);
  return acc.value() / static_cast<double>(source.modulus());
}

/// (1/2) Re int_0^t int_0^t G(u/t) G(v/t) (Phi(2 pi u, -2 pi v) f_ab(u) conj(f_cd(v))
///   - Phi(2 pi u, 2 pi v) f_ab(u) f_cd(v)) du/u dv/v
/// by a tensor Gauss-Legendre rule with `nodes` points per axis (composite
/// 16-point panels), using one batched contraction of the provider.
double smoothed_rect_frequency(const CfProvider& cf, const Rectangle& R, double t,
                               std::size_t nodes = 64);

/// Sum of the four Fejer error terms I(t,a) + I(t,b) + J(t,c) + J(t,d).
double fejer_rect_budget(const CfProvider& cf, const Rectangle& R, double t,
                         const QuadratureOptions& opts = {});

struct SmoothingPreset {
  double t = 0.0;
  int N = 0;
};

/// t = min(H^(1/4), sqrt(log q / log H) / (60 pi)), N = floor((8 pi t)^2).
SmoothingPreset paper_preset_t_N(std::uint64_t q, std::uint64_t H);

}  // namespace charsum
