#include "charsum/distribution.hpp"

#include <algorithm>
#include <cmath>

namespace charsum {

std::vector<Rectangle> default_rectangle_family() {
  std::vector<Rectangle> family;
  for (double h : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) family.emplace_back(-h, h, -h, h);
  family.emplace_back(0.0, 3.0, -3.0, 3.0);
  family.emplace_back(-3.0, 0.0, -3.0, 3.0);
  family.emplace_back(-3.0, 3.0, 0.0, 3.0);
  family.emplace_back(-3.0, 3.0, -3.0, 0.0);
  family.emplace_back(0.0, 3.0, 0.0, 3.0);
  family.emplace_back(-3.0, 0.0, 0.0, 3.0);
  family.emplace_back(-3.0, 0.0, -3.0, 0.0);
  family.emplace_back(0.0, 3.0, -3.0, 0.0);
  for (double c : {-3.0, -2.0, -1.0, 0.0, 1.0, 2.0}) family.emplace_back(-3.0, 3.0, c, c + 1.0);
  for (double a : {-3.0, -2.0, -1.0, 0.0, 1.0, 2.0}) family.emplace_back(a, a + 1.0, -3.0, 3.0);
  family.emplace_back(-1.0, 2.0, -0.5, 1.5);
  family.emplace_back(0.5, 2.5, -2.0, -0.5);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      const double a = -3.0 + 0.5 * i, c = -3.0 + 0.5 * j;
      family.emplace_back(a, a + 0.5, c, c + 0.5);
    }
  }
  return family;
}

double thm1_bound(const Rectangle& R, std::uint64_t H, std::uint64_t q) {
  const double lh = std::log(static_cast<double>(H));
  const double lq = std::log(static_cast<double>(q));
  return (R.area() + 1.0) * (std::pow(static_cast<double>(H), -0.25) + std::sqrt(lh / lq));
}

bool outside_theorem_range(std::uint64_t H, std::uint64_t q) {
  return 20.0 * std::log(static_cast<double>(H)) > std::log(static_cast<double>(q));
}

double DiscrepancyReport::max_gap() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.gap);
  return m;
}

double DiscrepancyReport::mean_gap() const {
  if (rows.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : rows) s += r.gap;
  return s / static_cast<double>(rows.size());
}

double DiscrepancyReport::max_bound() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.bound);
  return m;
}

DiscrepancyReport discrepancy_from_counts(std::uint64_t q, std::uint64_t H, std::string label,
                                          const std::vector<Rectangle>& rects,
                                          const std::vector<u64>& counts) {
  DiscrepancyReport rep;
  rep.q = q;
  rep.H = H;
  rep.label = std::move(label);
  rep.exploratory = outside_theorem_range(H, q);
  for (std::size_t k = 0; k < rects.size(); ++k) {
    DiscrepancyRow row{rects[k]};
    row.mu2 = rects[k].area();
    row.empirical = static_cast<double>(counts[k]) / static_cast<double>(q);
    row.gauss = gauss_rect_prob(rects[k]);
    row.gap = std::fabs(row.empirical - row.gauss);
    row.bound = thm1_bound(rects[k], H, q);
    rep.rows.push_back(row);
  }
  return rep;
}

double ks_distance_normal(std::vector<double> sample) {
  if (sample.empty()) throw PreconditionError("ks_distance_normal: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sample.size()) {
    std::size_t j = i;
    while (j < sample.size() && sample[j] == sample[i]) ++j;
    const double phi = gauss_cdf(sample[i]);
    d = std::max({d, std::fabs(static_cast<double>(i) / n - phi), std::fabs(static_cast<double>(j) / n - phi)});
    i = j;
  }
  return d;
}

DiscrepancyReport conjecture1_preset(const Character& chi, std::uint64_t H,
                                     const std::vector<Rectangle>& rects, unsigned threads) {
  const u64 q = chi.modulus();
  if (H < 1 || static_cast<double>(H) > static_cast<double>(q) / (10.0 * std::log(static_cast<double>(q)))) {
    throw PreconditionError("conjecture1_preset: need 1 <= H <= q / (10 log q)");
  }
  WindowOptions opts;
  opts.threads = threads;
  WindowSource source(chi, H, opts);
  auto rep = discrepancy(source, rects, std::string("EXPLORATORY ") + to_string(source.normalization()), threads);
  rep.exploratory = true;
  return rep;
}

}  // namespace charsum
