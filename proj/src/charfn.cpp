#include "charsum/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "charsum/errors.hpp"
#include "charsum/randmodel.hpp"

namespace charsum {

namespace {

// Plain double partial sums over short runs, folded into double-double.
constexpr std::size_t kFlushEvery = 256;

inline void cis(double phase, double& c, double& s) {
  c = std::cos(phase);
  s = std::sin(phase);
}

}  // namespace

std::vector<std::complex<double>> CfProvider::contract(std::span<const TensorContraction> jobs) const {
  std::vector<std::complex<double>> out;
  out.reserve(jobs.size());
  for (const auto& job : jobs) {
    std::vector<CfNode> nodes;
    nodes.reserve(job.u.size() * job.v.size());
    for (double u : job.u) {
      for (double v : job.v) nodes.push_back({u, v});
    }
    const auto phi = evaluate(nodes);
    std::complex<double> total;
    for (std::size_t i = 0; i < job.u.size(); ++i) {
      std::complex<double> row;
      for (std::size_t j = 0; j < job.v.size(); ++j) row += job.b[j] * phi[i * job.v.size() + j];
      total += job.a[i] * row;
    }
    out.push_back(total);
  }
  return out;
}

std::vector<std::complex<double>> GaussianCf::evaluate(std::span<const CfNode> nodes) const {
  std::vector<std::complex<double>> out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out[i] = std::exp(-(nodes[i].u * nodes[i].u + nodes[i].v * nodes[i].v) / 2.0);
  }
  return out;
}

std::vector<std::complex<double>> ModelCf::evaluate(std::span<const CfNode> nodes) const {
  std::vector<std::complex<double>> out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = model_cf(nodes[i].u, nodes[i].v, H_);
  return out;
}

CfSink::CfSink(std::vector<CfNode> nodes) : nodes_(std::move(nodes)) {
  std::map<double, std::size_t> us, vs;
  for (const auto& n : nodes_) {
    us.emplace(n.u, 0);
    vs.emplace(n.v, 0);
  }
  if (us.size() * vs.size() != nodes_.size() || nodes_.size() < 4) return;
  std::size_t i = 0;
  for (auto& [u, idx] : us) {
    idx = i++;
    us_.push_back(u);
  }
  i = 0;
  for (auto& [v, idx] : vs) {
    idx = i++;
    vs_.push_back(v);
  }
  std::vector<bool> seen(nodes_.size(), false);
  for (const auto& n : nodes_) {
    const std::size_t a = us[n.u], b = vs[n.v];
    if (seen[a * vs_.size() + b]) return;  // duplicate node, not a clean grid
    seen[a * vs_.size() + b] = true;
    u_of_.push_back(a);
    v_of_.push_back(b);
  }
  grid_ = true;
}

void CfSink::consume(partial_type& acc, const SeriesBlock& block) const {
  const std::size_t n = nodes_.size();
  std::vector<double> sr(n, 0.0), si(n, 0.0);
  std::vector<double> ucos(us_.size()), usin(us_.size()), vcos(vs_.size()), vsin(vs_.size());
  auto flush = [&] {
    for (std::size_t k = 0; k < n; ++k) {
      acc[k][0].add(sr[k]);
      acc[k][1].add(si[k]);
      sr[k] = si[k] = 0.0;
    }
  };
  for (std::size_t x = 0; x < block.size(); ++x) {
    const double X = block.re[x], Y = block.im[x];
    if (grid_) {
      for (std::size_t a = 0; a < us_.size(); ++a) cis(us_[a] * X, ucos[a], usin[a]);
      for (std::size_t b = 0; b < vs_.size(); ++b) cis(vs_[b] * Y, vcos[b], vsin[b]);
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t a = u_of_[k], b = v_of_[k];
        sr[k] += ucos[a] * vcos[b] - usin[a] * vsin[b];
        si[k] += ucos[a] * vsin[b] + usin[a] * vcos[b];
      }
    } else {
      for (std::size_t k = 0; k < n; ++k) {
        double c, s;
        cis(nodes_[k].u * X + nodes_[k].v * Y, c, s);
        sr[k] += c;
        si[k] += s;
      }
    }
    if ((x + 1) % kFlushEvery == 0) flush();
  }
  flush();
}

void CfSink::merge(partial_type& into, const partial_type& from) const {
  for (std::size_t k = 0; k < into.size(); ++k) {
    into[k][0].add(from[k][0]);
    into[k][1].add(from[k][1]);
  }
}

std::vector<std::complex<double>> CfSink::finish(const partial_type& acc, u64 q) const {
  std::vector<std::complex<double>> out(acc.size());
  const double inv = static_cast<double>(q);
  for (std::size_t k = 0; k < acc.size(); ++k) {
    out[k] = {acc[k][0].value() / inv, acc[k][1].value() / inv};
  }
  return out;
}

EmpiricalCf::EmpiricalCf(std::shared_ptr<const NormalizedSeries> series, unsigned threads,
                         double cost_budget)
    : series_(std::move(series)), threads_(resolve_threads(threads)), budget_(cost_budget) {
  if (!series_) throw PreconditionError("EmpiricalCf: null series");
}

std::vector<std::complex<double>> EmpiricalCf::evaluate(std::span<const CfNode> nodes) const {
  const auto grid = empirical_cf(*series_, std::vector<CfNode>(nodes.begin(), nodes.end()),
                                 threads_, budget_);
  std::vector<std::complex<double>> out;
  out.reserve(grid.entries.size());
  for (const auto& e : grid.entries) out.push_back(e.value);
  return out;
}

std::vector<std::complex<double>> EmpiricalCf::contract(std::span<const TensorContraction> jobs) const {
  // sum_ij a_i b_j Phi(u_i, v_j) = (1/q) sum_x (sum_i a_i e^{i u_i X}) (sum_j b_j e^{i v_j Y})
  double cost = 0.0;
  for (const auto& j : jobs) cost += static_cast<double>(j.u.size() + j.v.size());
  if (cost * static_cast<double>(series_->q) > budget_) {
    throw PreconditionError("EmpiricalCf::contract: evaluation budget exceeded");
  }
  struct Sink {
    using partial_type = std::vector<std::array<DoubleDouble, 2>>;
    std::span<const TensorContraction> jobs;
    partial_type init() const { return partial_type(jobs.size()); }
    void consume(partial_type& acc, const SeriesBlock& b) const {
      for (std::size_t t = 0; t < jobs.size(); ++t) {
        const auto& job = jobs[t];
        double sr = 0.0, si = 0.0;
        for (std::size_t x = 0; x < b.size(); ++x) {
          double ar = 0.0, ai = 0.0, br = 0.0, bi = 0.0;
          for (std::size_t i = 0; i < job.u.size(); ++i) {
            double c, s;
            cis(job.u[i] * b.re[x], c, s);
            ar += job.a[i].real() * c - job.a[i].imag() * s;
            ai += job.a[i].real() * s + job.a[i].imag() * c;
          }
          for (std::size_t j = 0; j < job.v.size(); ++j) {
            double c, s;
            cis(job.v[j] * b.im[x], c, s);
            br += job.b[j].real() * c - job.b[j].imag() * s;
            bi += job.b[j].real() * s + job.b[j].imag() * c;
          }
          sr += ar * br - ai * bi;
          si += ar * bi + ai * br;
          if ((x + 1) % kFlushEvery == 0) {
            acc[t][0].add(sr);
            acc[t][1].add(si);
            sr = si = 0.0;
          }
        }
        acc[t][0].add(sr);
        acc[t][1].add(si);
      }
    }
    void merge(partial_type& a, const partial_type& b) const {
      for (std::size_t t = 0; t < a.size(); ++t) {
        a[t][0].add(b[t][0]);
        a[t][1].add(b[t][1]);
      }
    }
  };
  const auto acc = reduce_series(*series_, Sink{jobs}, threads_);
  std::vector<std::complex<double>> out(jobs.size());
  const double q = static_cast<double>(series_->q);
  for (std::size_t t = 0; t < jobs.size(); ++t) out[t] = {acc[t][0].value() / q, acc[t][1].value() / q};
  return out;
}

std::vector<CfNode> uniform_grid(double lo, double hi, std::size_t per_axis) {
  if (per_axis < 2 || !(lo < hi)) throw PreconditionError("uniform_grid: need per_axis >= 2 and lo < hi");
  std::vector<CfNode> nodes;
  const double step = (hi - lo) / static_cast<double>(per_axis - 1);
  for (std::size_t i = 0; i < per_axis; ++i) {
    for (std::size_t j = 0; j < per_axis; ++j) {
      nodes.push_back({lo + step * static_cast<double>(i), lo + step * static_cast<double>(j)});
    }
  }
  return nodes;
}

double Theorem31Report::max_gap() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.gap);
  return m;
}

bool Theorem31Report::within_budget() const {
  return std::all_of(rows.begin(), rows.end(), [](const Theorem31Row& r) { return r.gap <= r.budget; });
}

double truncation_budget(double u, double v, int N) {
  return (std::pow(2 * u * u, N) + std::pow(2 * v * v, N)) / std::tgamma(N + 1.0) +
         std::pow(2 * u * v, 2 * N) / std::tgamma(2 * N + 1.0);
}

double theorem31_budget(double u, double v, int N, std::uint64_t H, std::uint64_t q) {
  const double r2 = u * u + v * v;
  const double main = std::exp(-r2 / 2.0) * (std::pow(u, 4) + std::pow(v, 4)) / static_cast<double>(H);
  const double tail = std::pow(static_cast<double>(q), -0.25) * (1.0 + std::pow(u, 2 * N)) *
                      (1.0 + std::pow(v, 2 * N));
  return main + truncation_budget(u, v, N) + tail;
}

Theorem31Report theorem31_report(const CfGrid& grid, int N, std::uint64_t H, std::uint64_t q,
                                 double slack) {
  if (N < 1 || N > 8) throw PreconditionError("theorem31_report: N must be in [1, 8]");
  Theorem31Report rep;
  rep.N = N;
  rep.slack = slack;
  const double logH = std::log(static_cast<double>(H));
  rep.n_admissible = logH == 0.0 || N <= std::log(static_cast<double>(q)) / (20.0 * logH);
  const double reach = std::pow(static_cast<double>(H), 0.25);
  for (const auto& e : grid.entries) {
    Theorem31Row row;
    row.node = e.node;
    row.value = e.value;
    row.gauss = e.gauss;
    row.gap = std::abs(e.value - e.gauss);
    row.budget = slack * theorem31_budget(e.node.u, e.node.v, N, H, q);
    row.hypothesis_ok = rep.n_admissible && std::fabs(e.node.u) <= reach && std::fabs(e.node.v) <= reach;
    rep.rows.push_back(row);
  }
  return rep;
}

std::complex<double> truncated_cf_FN(const MomentTable& moments, int N, double u, double v,
                                     std::uint64_t H) {
  if (N < 1) throw PreconditionError("truncated_cf_FN: N must be positive");
  const double half_h = static_cast<double>(H) / 2.0;
  std::complex<double> total;
  const std::complex<double> iu(0.0, u), iv(0.0, v);
  for (int r = 0; r < 2 * N; ++r) {
    for (int s = 0; s < 2 * N; ++s) {
      if (!moments.has(r, s)) {
        throw PreconditionError("truncated_cf_FN: moment (" + std::to_string(r) + "," +
                                std::to_string(s) + ") missing");
      }
      const double denom = std::pow(half_h, (r + s) / 2.0) * std::tgamma(r + 1.0) * std::tgamma(s + 1.0);
      total += std::pow(iu, r) * std::pow(iv, s) * (moments.at(r, s).empirical / denom);
    }
  }
  return total;
}

}  // namespace charsum
