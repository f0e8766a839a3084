#include "charsum/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "charsum/errors.hpp"
#include "charsum/parallel.hpp"
#include "charsum/random.hpp"

namespace charsum {

namespace {

int triangle_index(int r, int s) {
  const int n = r + s;
  return n * (n + 1) / 2 + s;
}

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double big_to_double(const BigRational& r) { return static_cast<double>(r); }

}  // namespace

std::vector<MomentIndex> moment_indices(int max_order) {
  std::vector<MomentIndex> out;
  for (int n = 0; n <= max_order; ++n) {
    for (int s = 0; s <= n; ++s) out.push_back({n - s, s});
  }
  return out;
}

MomentSink::MomentSink(std::vector<MomentIndex> indices, double scale)
    : indices_(std::move(indices)), scale_(scale) {
  for (const auto& i : indices_) {
    if (i.r < 0 || i.s < 0) throw PreconditionError("moment orders must be non-negative");
    max_order_ = std::max({max_order_, i.r, i.s});
  }
  if (max_order_ > 16) throw PreconditionError("moment order above 16 is not supported");
}

void MomentSink::consume(partial_type& acc, const SeriesBlock& block) const {
  std::array<double, 17> pr{}, pi{};
  pr[0] = pi[0] = 1.0;
  for (std::size_t x = 0; x < block.size(); ++x) {
    for (int e = 1; e <= max_order_; ++e) {
      pr[e] = pr[e - 1] * block.re[x];
      pi[e] = pi[e - 1] * block.im[x];
    }
    for (std::size_t t = 0; t < indices_.size(); ++t) {
      acc[t].add(pr[indices_[t].r] * pi[indices_[t].s]);
    }
  }
}

void MomentSink::merge(partial_type& into, const partial_type& from) const {
  for (std::size_t t = 0; t < into.size(); ++t) into[t].add(from[t]);
}

std::vector<double> MomentSink::finish(const partial_type& acc, u64 q) const {
  std::vector<double> out(acc.size());
  for (std::size_t t = 0; t < acc.size(); ++t) {
    const int deg = indices_[t].r + indices_[t].s;
    out[t] = acc[t].value() / static_cast<double>(q) * std::pow(scale_, deg);
  }
  return out;
}

double empirical_moment(const WindowSource& source, int r, int s) {
  if (r < 0 || s < 0 || r + s > kDefaultMaxMomentOrder) {
    throw PreconditionError("empirical_moment: need r, s >= 0 and r + s <= 8");
  }
  return empirical_moments(source, {{r, s}}, source.scale(),
                           resolve_threads(source.options().threads))[0];
}

std::vector<std::complex<double>> complex_moments(const WindowSource& source, int max_order) {
  if (max_order < 0 || max_order > 16) throw PreconditionError("complex_moments: bad order");
  struct Sink {
    using partial_type = std::vector<std::array<DoubleDouble, 2>>;
    int max_order;
    partial_type init() const {
      return partial_type(static_cast<std::size_t>((max_order + 1) * (max_order + 2) / 2));
    }
    void consume(partial_type& acc, const SeriesBlock& b) const {
      std::array<std::complex<double>, 17> zp, cp;
      zp[0] = cp[0] = 1.0;
      for (std::size_t x = 0; x < b.size(); ++x) {
        const std::complex<double> z(b.re[x], b.im[x]);
        for (int e = 1; e <= max_order; ++e) {
          zp[e] = zp[e - 1] * z;
          cp[e] = cp[e - 1] * std::conj(z);
        }
        for (int n = 0; n <= max_order; ++n) {
          for (int l = 0; l <= n; ++l) {
            const auto v = zp[n - l] * cp[l];
            auto& slot = acc[static_cast<std::size_t>(triangle_index(n - l, l))];
            slot[0].add(v.real());
            slot[1].add(v.imag());
          }
        }
      }
    }
    void merge(partial_type& a, const partial_type& b) const {
      for (std::size_t t = 0; t < a.size(); ++t) {
        a[t][0].add(b[t][0]);
        a[t][1].add(b[t][1]);
      }
    }
  };
  const auto acc = reduce_series(source, Sink{max_order}, resolve_threads(source.options().threads));
  std::vector<std::complex<double>> out(acc.size());
  const double q = static_cast<double>(source.modulus());
  for (int n = 0; n <= max_order; ++n) {
    const double f = std::pow(source.scale(), n) / q;
    for (int l = 0; l <= n; ++l) {
      const auto t = static_cast<std::size_t>(triangle_index(n - l, l));
      out[t] = {acc[t][0].value() * f, acc[t][1].value() * f};
    }
  }
  return out;
}

std::complex<double> moment_from_complex(const std::vector<std::complex<double>>& I, int r, int s) {
  const int n = r + s;
  if (static_cast<std::size_t>(triangle_index(n, 0)) + static_cast<std::size_t>(n) >= I.size()) {
    throw PreconditionError("moment_from_complex: complex moments of degree r + s are missing");
  }
  // (2i)^-s = 2^-s (-i)^s
  static const std::complex<double> kMinusIPow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  const std::complex<double> prefactor = std::ldexp(1.0, -n) * kMinusIPow[s % 4];
  std::complex<double> total;
  for (int j = 0; j <= r; ++j) {
    for (int k = 0; k <= s; ++k) {
      const double coef = static_cast<double>(binomial(r, j) * binomial(s, k)) *
                          (((s - k) % 2) ? -1.0 : 1.0);
      const int a = j + k;
      total += coef * I[static_cast<std::size_t>(triangle_index(a, n - a))];
    }
  }
  return prefactor * total;
}

BigInt multiset_count_B(int m, std::uint64_t H, int max_m) {
  if (m < 0 || m > max_m) {
    throw PreconditionError("multiset_count_B: m = " + std::to_string(m) + " outside [0, " +
                            std::to_string(max_m) + "]");
  }
  if (H == 0) throw PreconditionError("multiset_count_B: H must be positive");
  const auto len = static_cast<std::size_t>(m + 1);
  using Poly = std::vector<BigRational>;
  auto multiply = [&](const Poly& a, const Poly& b) {
    Poly c(len, BigRational(0));
    for (std::size_t i = 0; i < len; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; i + j < len; ++j) c[i + j] += a[i] * b[j];
    }
    return c;
  };
  Poly base(len);
  for (std::size_t k = 0; k < len; ++k) {
    const BigInt f = factorial(static_cast<int>(k));
    base[k] = BigRational(1, f * f);
  }
  Poly result(len, BigRational(0));
  result[0] = 1;
  for (std::uint64_t e = H; e; e >>= 1) {
    if (e & 1) result = multiply(result, base);
    if (e > 1) base = multiply(base, base);
  }
  const BigInt fm = factorial(m);
  const BigRational value = result[len - 1] * BigRational(fm * fm);
  if (denominator(value) != 1) throw std::logic_error("multiset_count_B: non-integral result");
  return numerator(value);
}

BigRational model_coefficient(int r, int s) {
  if (r < 0 || s < 0) throw PreconditionError("model_coefficient: need r, s >= 0");
  if ((r + s) % 2) return 0;
  const int m = (r + s) / 2;
  BigInt total = 0;
  for (int j = std::max(0, m - s); j <= std::min(r, m); ++j) {
    const int k = m - j;
    BigInt term = binomial(r, j) * binomial(s, k);
    total += ((s - k) % 2) ? BigInt(-term) : term;
  }
  if (s % 2) {
    // Purely imaginary prefactor; the expectation is real, so the sum must vanish.
    if (total != 0) throw std::logic_error("model_coefficient: non-real coefficient");
    return 0;
  }
  // (2i)^-s = 2^-s (-1)^(s/2) for even s
  BigRational c(total, BigInt(1) << (r + s));
  return (s / 2) % 2 ? BigRational(-c) : c;
}

BigRational model_moment_exact(int r, int s, std::uint64_t H) {
  if ((r + s) % 2) return 0;
  return BigRational(multiset_count_B((r + s) / 2, H)) * model_coefficient(r, s);
}

double model_moment(int r, int s, std::uint64_t H) {
  return big_to_double(model_moment_exact(r, s, H));
}

const MomentEntry& MomentTable::at(int r, int s) const {
  for (const auto& e : entries) {
    if (e.r == r && e.s == s) return e;
  }
  throw std::out_of_range("MomentTable: entry (" + std::to_string(r) + "," + std::to_string(s) +
                          ") missing");
}

bool MomentTable::has(int r, int s) const {
  return std::any_of(entries.begin(), entries.end(),
                     [&](const MomentEntry& e) { return e.r == r && e.s == s; });
}

MomentTable assemble_moment_table(u64 q, u64 H, const std::vector<MomentIndex>& indices,
                                  const std::vector<double>& empirical) {
  MomentTable t;
  t.q = q;
  t.H = H;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    MomentEntry e;
    e.r = indices[i].r;
    e.s = indices[i].s;
    const int n = e.r + e.s;
    e.empirical = empirical[i];
    e.model_exact = model_moment_exact(e.r, e.s, H);
    e.model = big_to_double(e.model_exact);
    e.diff = std::fabs(e.empirical - e.model);
    e.bound = n * std::pow(static_cast<double>(H), n) / std::sqrt(static_cast<double>(q));
    e.ratio = e.bound > 0.0 ? e.diff / e.bound : 0.0;
    // H^n <= sqrt(q)  <=>  H^(2n) <= q
    e.hypothesis_ok = boost::multiprecision::pow(BigInt(H), 2 * n) <= BigInt(q);
    t.entries.push_back(std::move(e));
  }
  return t;
}

MomentTable prop22_compare(const WindowSource& source, const std::vector<MomentIndex>& indices) {
  for (const auto& i : indices) {
    if (i.r + i.s > kDefaultMaxMomentOrder) throw PreconditionError("prop22_compare: r + s > 8");
  }
  const auto emp = empirical_moments(source, indices, source.scale(),
                                     resolve_threads(source.options().threads));
  return assemble_moment_table(source.modulus(), source.window(), indices, emp);
}

TupleSumCheck shifted_product_sum(const Character& chi, const std::vector<u64>& y,
                                  const std::vector<u64>& z, unsigned threads) {
  if (y.size() + z.size() > 12) throw PreconditionError("shifted_product_sum: k + l must be <= 12");
  const u64 q = chi.modulus();
  const u64 d = chi.order();
  TupleSumCheck out;
  out.y = y;
  out.z = z;
  auto ys = y, zs = z;
  std::sort(ys.begin(), ys.end());
  std::sort(zs.begin(), zs.end());
  out.diagonal = ys == zs;
  std::map<u64, std::pair<u64, u64>> mult;
  for (u64 v : y) ++mult[v % q].first;
  for (u64 v : z) ++mult[v % q].second;
  out.degenerate = !out.diagonal && std::all_of(mult.begin(), mult.end(), [&](const auto& kv) {
    const auto [a, b] = kv.second;
    return (a + d - b % d) % d == 0;
  });
  out.bound = static_cast<double>(y.size() + z.size()) * std::sqrt(static_cast<double>(q));

  // Class of the summand at x: sum of classes of the y factors minus those of the z factors.
  constexpr u64 kRanges = 8;
  const bool dense = d <= (u64{1} << 22);
  struct Partial {
    std::vector<u64> dense;
    std::unordered_map<u64, u64> sparse;
    u64 vanishing = 0;
  };
  std::vector<Partial> parts(kRanges);
  parallel_for(kRanges, resolve_threads(threads), [&](u64 r) {
    Partial& p = parts[r];
    if (dense) p.dense.assign(d, 0);
    const u64 lo = q * r / kRanges, hi = q * (r + 1) / kRanges;
    for (u64 x = lo; x < hi; ++x) {
      u64 cls = 0;
      bool zero = false;
      for (u64 v : y) {
        const u32 j = chi.value_class(x + v);
        if (j == Character::kZeroClass) {
          zero = true;
          break;
        }
        cls += j;
      }
      if (!zero) {
        for (u64 v : z) {
          const u32 j = chi.value_class(x + v);
          if (j == Character::kZeroClass) {
            zero = true;
            break;
          }
          cls += d - j;
        }
      }
      if (zero) {
        ++p.vanishing;
        continue;
      }
      cls %= d;
      if (dense) {
        ++p.dense[cls];
      } else {
        ++p.sparse[cls];
      }
    }
  });
  std::map<u64, u64> counts;
  for (auto& p : parts) {
    out.vanishing += p.vanishing;
    for (u64 j = 0; j < p.dense.size(); ++j) {
      if (p.dense[j]) counts[j] += p.dense[j];
    }
    for (const auto& [j, c] : p.sparse) counts[j] += c;
  }
  CompensatedSum re, im;
  for (const auto& [j, c] : counts) {
    const auto w = chi.root(static_cast<u32>(j));
    re.add(static_cast<double>(c) * w.real());
    im.add(static_cast<double>(c) * w.imag());
  }
  out.sum = {re.value(), im.value()};
  return out;
}

WeilReport weil_check(const Character& chi, std::size_t samples, int k, int l, u64 H,
                      std::uint64_t seed) {
  if (k < 0 || l < 0 || k + l < 1 || k + l > 12) throw PreconditionError("weil_check: need 1 <= k + l <= 12");
  if (H < 1 || H >= chi.modulus()) throw PreconditionError("weil_check: need 1 <= H < q");
  if (k == l && H == 1) throw PreconditionError("weil_check: no off-diagonal tuples exist");
  CounterRng rng(seed, (static_cast<std::uint64_t>(k) << 8) | static_cast<std::uint64_t>(l));
  WeilReport report;
  for (std::size_t i = 0; i < samples; ++i) {
    std::vector<u64> y(k), z(l);
    for (;;) {
      for (auto& v : y) v = 1 + rng.below(H);
      for (auto& v : z) v = 1 + rng.below(H);
      auto ys = y, zs = z;
      std::sort(ys.begin(), ys.end());
      std::sort(zs.begin(), zs.end());
      if (ys != zs) break;
    }
    auto check = shifted_product_sum(chi, y, z);
    if (check.degenerate) {
      ++report.flagged;
    } else {
      ++report.off_diagonal;
      const double ratio = std::abs(check.sum) / check.bound;
      report.max_ratio = std::max(report.max_ratio, ratio);
      if (std::abs(check.sum) > check.bound) ++report.violations;
    }
    report.checks.push_back(std::move(check));
  }
  return report;
}

}  // namespace charsum
