#include "charsum/selberg.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "charsum/errors.hpp"

namespace charsum {

namespace {

constexpr double kPi = std::numbers::pi;

// w cot w, with a series near the removable singularity.
double w_cot_w(double w) {
  if (std::fabs(w) < 1e-3 * kPi) {
    const double w2 = w * w;
    return 1.0 - w2 / 3.0 - w2 * w2 / 45.0 - 2.0 * w2 * w2 * w2 / 945.0;
  }
  return w / std::tan(w);
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

template <class V>
V checked(const IntegrationResult<V>& r, const char* what) {
  if (!r.converged) {
    throw QuadratureError(std::string(what) + ": quadrature did not converge (error estimate " +
                          std::to_string(r.abs_error) + ")");
  }
  return r.value;
}

void require_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw PreconditionError("smoothing parameter t must be positive");
}

}  // namespace

double selberg_G(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw PreconditionError("selberg_G: u must lie in [0,1]");
  if (u <= 0.5) return 2.0 * u / kPi + 2.0 / kPi * (1.0 - u) * w_cot_w(kPi * u);
  return 2.0 * u / kPi - 2.0 / kPi * u * w_cot_w(kPi * (1.0 - u));
}

std::complex<double> f_ab(double alpha, double beta, double u) {
  return (std::polar(1.0, -2.0 * kPi * alpha * u) - std::polar(1.0, -2.0 * kPi * beta * u)) / 2.0;
}

std::complex<double> f_ab_over_u(double alpha, double beta, double u) {
  // f(u) = i exp(-pi i (alpha+beta) u) sin(pi (beta-alpha) u)
  const double width = kPi * (beta - alpha);
  return std::complex<double>(0.0, width * sinc(width * u)) *
         std::polar(1.0, -kPi * (alpha + beta) * u);
}

double sgn_approx(double x, double t, const QuadratureOptions& opts) {
  require_t(t);
  if (x == 0.0) return 0.0;
  const auto r = integrate<double>(
      [&](double u) { return selberg_G(std::min(1.0, u / t)) * 2.0 * kPi * x * sinc(2.0 * kPi * u * x); },
      0.0, t, opts);
  return checked(r, "sgn_approx");
}

double indicator_approx(double x, double alpha, double beta, double t, const QuadratureOptions& opts) {
  require_t(t);
  if (!(alpha < beta)) throw PreconditionError("indicator_approx: need alpha < beta");
  const auto r = integrate<double>(
      [&](double u) {
        return selberg_G(std::min(1.0, u / t)) *
               (std::polar(1.0, 2.0 * kPi * u * x) * f_ab_over_u(alpha, beta, u)).imag();
      },
      0.0, t, opts);
  return checked(r, "indicator_approx");
}

double gaussian_smoothed_interval(double a, double b, double t, const QuadratureOptions& opts) {
  require_t(t);
  if (!(a < b)) throw PreconditionError("gaussian_smoothed_interval: need a < b");
  const auto r = integrate<double>(
      [&](double u) {
        const double w = 2.0 * kPi * u;
        return selberg_G(std::min(1.0, u / t)) * std::exp(-w * w / 2.0) * f_ab_over_u(a, b, u).imag();
      },
      0.0, t, opts);
  return checked(r, "gaussian_smoothed_interval");
}

double fejer_kernel(double x, double t) {
  const double s = sinc(kPi * t * x);
  return s * s;
}

double fejer_identity_check(double x, double t, const QuadratureOptions& opts) {
  require_t(t);
  const auto r = integrate<double>([&](double v) { return (t - v) * std::cos(2.0 * kPi * x * v); },
                                   0.0, t, opts);
  return std::fabs(fejer_kernel(x, t) - 2.0 / (t * t) * checked(r, "fejer_identity_check"));
}

double fejer_error_term(const CfProvider& cf, double t, double l, Axis axis,
                        const QuadratureOptions& opts) {
  require_t(t);
  std::vector<CfNode> nodes;
  auto batch = [&](std::span<const double> vs, std::span<double> out) {
    nodes.clear();
    for (double v : vs) {
      const double w = 2.0 * kPi * v;
      nodes.push_back(axis == Axis::real ? CfNode{w, 0.0} : CfNode{0.0, w});
    }
    const auto phi = cf.evaluate(nodes);
    for (std::size_t i = 0; i < vs.size(); ++i) {
      out[i] = 2.0 * (t - vs[i]) / (t * t) * (std::polar(1.0, -2.0 * kPi * vs[i] * l) * phi[i]).real();
    }
  };
  return checked(integrate_batched<double>(batch, 0.0, t, opts), "fejer_error_term");
}

double smoothed_rect_frequency(const CfProvider& cf, const Rectangle& R, double t, std::size_t nodes) {
  require_t(t);
  constexpr std::size_t kPanelPoints = 16;
  if (nodes < kPanelPoints || nodes % kPanelPoints != 0) {
    throw PreconditionError("smoothed_rect_frequency: nodes must be a positive multiple of 16");
  }
  const std::size_t panels = nodes / kPanelPoints;
  std::vector<double> u, u_neg;
  std::vector<std::complex<double>> a, b, b_conj;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = t * static_cast<double>(p) / static_cast<double>(panels);
    const double hi = t * static_cast<double>(p + 1) / static_cast<double>(panels);
    const auto rule = gauss_legendre(kPanelPoints, lo, hi);
    for (std::size_t i = 0; i < kPanelPoints; ++i) {
      const double x = rule.nodes[i];
      const double g = rule.weights[i] * selberg_G(std::min(1.0, x / t));
      u.push_back(2.0 * kPi * x);
      u_neg.push_back(-2.0 * kPi * x);
      a.push_back(g * f_ab_over_u(R.a(), R.b(), x));
      b.push_back(g * f_ab_over_u(R.c(), R.d(), x));
      b_conj.push_back(std::conj(b.back()));
    }
  }
  const TensorContraction jobs[2] = {{u, a, u_neg, b_conj}, {u, a, u, b}};
  const auto c = cf.contract(jobs);
  return 0.5 * (c[0] - c[1]).real();
}

double fejer_rect_budget(const CfProvider& cf, const Rectangle& R, double t, const QuadratureOptions& opts) {
  return fejer_error_term(cf, t, R.a(), Axis::real, opts) + fejer_error_term(cf, t, R.b(), Axis::real, opts) +
         fejer_error_term(cf, t, R.c(), Axis::imag, opts) + fejer_error_term(cf, t, R.d(), Axis::imag, opts);
}

SmoothingPreset paper_preset_t_N(std::uint64_t q, std::uint64_t H) {
  if (H < 2 || q <= H) throw PreconditionError("paper_preset_t_N: need 2 <= H < q");
  const double lq = std::log(static_cast<double>(q));
  const double lh = std::log(static_cast<double>(H));
  SmoothingPreset p;
  p.t = std::min(std::pow(static_cast<double>(H), 0.25), std::sqrt(lq / lh) / (60.0 * kPi));
  const double n = 8.0 * kPi * p.t;
  p.N = static_cast<int>(std::floor(n * n));
  return p;
}

}  // namespace charsum
