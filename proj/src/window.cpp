#include "charsum/window.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "charsum/errors.hpp"

namespace charsum {

double normalization_scale(Normalization mode, u64 H) {
  switch (mode) {
    case Normalization::none: return 1.0;
    case Normalization::real: return std::sqrt(static_cast<double>(H));
    case Normalization::complex: return std::sqrt(static_cast<double>(H) / 2.0);
  }
  return 1.0;
}

Normalization natural_normalization(const Character& chi) {
  return chi.is_real() ? Normalization::real : Normalization::complex;
}

const char* to_string(Normalization mode) {
  switch (mode) {
    case Normalization::none: return "none";
    case Normalization::real: return "real";
    case Normalization::complex: return "complex";
  }
  return "?";
}

bool WindowSummary::exact_sum_zero() const {
  if (!exact_mode) return false;
  if (has_integer_sums) return integer_sum == 0;
  return std::all_of(class_totals.begin(), class_totals.end(),
                     [&](std::int64_t t) { return t == class_totals.front(); });
}

std::complex<double> WindowSummary::mean() const {
  if (exact_sum_zero()) return {0.0, 0.0};
  const double n = static_cast<double>(q);
  return {sum_re.value() / n, sum_im.value() / n};
}

double WindowSummary::second_moment() const {
  if (has_integer_sums) {
    // Exact integer, rounded once.
    return static_cast<double>(static_cast<long double>(integer_sum_sq) /
                               static_cast<long double>(q));
  }
  return sum_abs2.value() / static_cast<double>(q);
}

void WindowSummary::merge(const WindowSummary& other) {
  for (std::size_t j = 0; j < class_totals.size(); ++j) class_totals[j] += other.class_totals[j];
  zero_windows += other.zero_windows;
  sum_re.add(other.sum_re);
  sum_im.add(other.sum_im);
  sum_abs2.add(other.sum_abs2);
  integer_sum += other.integer_sum;
  integer_sum_sq += other.integer_sum_sq;
}

WindowSource::WindowSource(Character chi, u64 H, WindowOptions options)
    : chi_(std::move(chi)), q_(chi_.modulus()), H_(H), options_(options) {
  if (H_ < 1 || H_ >= q_) {
    throw PreconditionError("window length H must satisfy 1 <= H < q (H = " + std::to_string(H_) +
                            ", q = " + std::to_string(q_) + ")");
  }
  if (options_.chunk_length == 0) throw PreconditionError("chunk_length must be positive");
  if (options_.resync_period == 0) throw PreconditionError("resync_period must be positive");
  exact_ = chi_.order() <= options_.exact_order_limit;
  norm_ = options_.normalization.value_or(natural_normalization(chi_));
  scale_ = normalization_scale(norm_, H_);
}

std::pair<u64, u64> WindowSource::chunk_range(u64 c) const {
  const u64 x0 = c * options_.chunk_length;
  return {x0, std::min(q_, x0 + options_.chunk_length)};
}

WindowSummary WindowSource::empty_summary() const {
  WindowSummary s;
  s.q = q_;
  s.H = H_;
  s.order = chi_.order();
  s.exact_mode = exact_;
  if (exact_) s.class_totals.assign(chi_.order(), 0);
  s.has_integer_sums = exact_ && chi_.order() == 2;
  return s;
}

void WindowSource::visit_chunk(u64 c, const std::function<void(const SeriesBlock&)>& fn,
                               WindowSummary* summary) const {
  const auto [x0, x1] = chunk_range(c);
  std::vector<double> re(x1 - x0), im(x1 - x0);
  if (exact_) {
    visit_counter(x0, x1, re, im, summary);
  } else {
    visit_float(x0, x1, re, im);
    if (summary) {
      // Window x holds a multiple of q iff x + H >= q (x < q).
      const u64 first = q_ - H_;
      if (x1 > first) summary->zero_windows += x1 - std::max(x0, first);
    }
  }
  if (summary) {
    for (std::size_t i = 0; i < re.size(); ++i) {
      summary->sum_re.add(re[i]);
      summary->sum_im.add(im[i]);
      summary->sum_abs2.add(re[i] * re[i] + im[i] * im[i]);
    }
  }
  if (scale_ != 1.0) {
    for (std::size_t i = 0; i < re.size(); ++i) {
      re[i] /= scale_;
      im[i] /= scale_;
    }
  }
  fn(SeriesBlock{x0, re, im});
}

void WindowSource::visit_counter(u64 x0, u64 x1, std::vector<double>& re, std::vector<double>& im,
                                 WindowSummary* summary) const {
  const u64 d = chi_.order();
  std::vector<std::int64_t> counts(d, 0);
  std::int64_t zeros = 0;
  for (u64 n = x0 + 1; n <= x0 + H_; ++n) {
    const u32 j = chi_.value_class(n);
    if (j == Character::kZeroClass) {
      ++zeros;
    } else {
      ++counts[j];
    }
  }
  std::vector<std::complex<double>> roots(d);
  for (u64 j = 0; j < d; ++j) roots[j] = chi_.root(static_cast<u32>(j));

  const bool integer = d == 2;
  const bool rebuild_each_step = d <= options_.materialize_limit;
  auto materialize = [&](double& r, double& i) {
    if (integer) {
      r = static_cast<double>(counts[0] - counts[1]);
      i = 0.0;
      return;
    }
    double sr = 0.0, si = 0.0;
    for (u64 j = 0; j < d; ++j) {
      if (counts[j] == 0) continue;
      const double c = static_cast<double>(counts[j]);
      sr += c * roots[j].real();
      si += c * roots[j].imag();
    }
    r = sr;
    i = si;
  };

  // Lazy per-class totals: sum over x of counts[j], flushed whenever counts[j]
  // changes.
  std::vector<u64> last_change;
  std::vector<std::int64_t> totals;
  if (summary) {
    last_change.assign(d, x0);
    totals.assign(d, 0);
  }
  auto touch = [&](u32 j, u64 x) {
    if (!summary) return;
    totals[j] += counts[j] * static_cast<std::int64_t>(x - last_change[j]);
    last_change[j] = x;
  };

  CompensatedSum run_re, run_im;
  double cr = 0.0, ci = 0.0;
  materialize(cr, ci);
  run_re.reset(cr);
  run_im.reset(ci);
  u64 since_resync = 0;
  std::int64_t int_sum = 0;
  unsigned __int128 int_sum_sq = 0;
  u64 zero_windows = 0;

  for (u64 x = x0; x < x1; ++x) {
    const std::size_t i = x - x0;
    if (rebuild_each_step) {
      materialize(re[i], im[i]);
    } else {
      re[i] = run_re.value();
      im[i] = run_im.value();
    }
    if (zeros > 0) ++zero_windows;
    if (integer && summary) {
      const std::int64_t s = counts[0] - counts[1];
      int_sum += s;
      int_sum_sq += static_cast<unsigned __int128>(s * s);
    }
    if (x + 1 == x1) break;
    const u32 out = chi_.value_class(x + 1);
    const u32 in = chi_.value_class(x + 1 + H_);
    if (out == Character::kZeroClass) {
      --zeros;
    } else {
      touch(out, x + 1);
      --counts[out];
    }
    if (in == Character::kZeroClass) {
      ++zeros;
    } else {
      touch(in, x + 1);
      ++counts[in];
    }
    if (!rebuild_each_step) {
      if (++since_resync >= options_.resync_period) {
        materialize(cr, ci);
        run_re.reset(cr);
        run_im.reset(ci);
        since_resync = 0;
      } else {
        if (out != Character::kZeroClass) {
          run_re.add(-roots[out].real());
          run_im.add(-roots[out].imag());
        }
        if (in != Character::kZeroClass) {
          run_re.add(roots[in].real());
          run_im.add(roots[in].imag());
        }
      }
    }
  }
  if (summary) {
    for (u64 j = 0; j < d; ++j) {
      totals[j] += counts[j] * static_cast<std::int64_t>(x1 - last_change[j]);
      summary->class_totals[j] += totals[j];
    }
    summary->zero_windows += zero_windows;
    summary->integer_sum += int_sum;
    summary->integer_sum_sq += int_sum_sq;
  }
}

void WindowSource::visit_float(u64 x0, u64 x1, std::vector<double>& re,
                               std::vector<double>& im) const {
  CompensatedSum run_re, run_im;
  auto reseed = [&](u64 x) {
    CompensatedSum r, i;
    for (u64 n = x + 1; n <= x + H_; ++n) {
      const auto v = chi_(n);
      r.add(v.real());
      i.add(v.imag());
    }
    run_re.reset(r.value());
    run_im.reset(i.value());
  };
  reseed(x0);
  u64 since_resync = 0;
  for (u64 x = x0; x < x1; ++x) {
    const std::size_t i = x - x0;
    re[i] = run_re.value();
    im[i] = run_im.value();
    if (x + 1 == x1) break;
    if (++since_resync >= options_.resync_period) {
      reseed(x + 1);
      since_resync = 0;
      continue;
    }
    const auto out = chi_(x + 1);
    const auto in = chi_(x + 1 + H_);
    run_re.add(-out.real());
    run_im.add(-out.imag());
    run_re.add(in.real());
    run_im.add(in.imag());
  }
}

WindowSummary summarize_series(const WindowSource& source) {
  struct NullSink {
    struct partial_type {};
    partial_type init() const { return {}; }
    void consume(partial_type&, const SeriesBlock&) const {}
    void merge(partial_type&, const partial_type&) const {}
  };
  return compute_series(source, NullSink{}).summary;
}

NormalizedSeries materialize(const WindowSource& source) {
  NormalizedSeries s;
  s.q = source.modulus();
  s.H = source.window();
  s.k = source.character().exponent();
  s.order = source.character().order();
  s.normalization = source.normalization();
  s.scale = source.scale();
  s.chunk_length = source.options().chunk_length;
  s.re.resize(s.q);
  s.im.resize(s.q);
  parallel_for(source.num_chunks(), resolve_threads(source.options().threads), [&](u64 c) {
    source.visit_chunk(c, [&](const SeriesBlock& b) {
      std::copy(b.re.begin(), b.re.end(), s.re.begin() + static_cast<std::ptrdiff_t>(b.x0));
      std::copy(b.im.begin(), b.im.end(), s.im.begin() + static_cast<std::ptrdiff_t>(b.x0));
    });
  });
  return s;
}

std::complex<double> window_sum_direct(const Character& chi, u64 H, u64 x) {
  std::complex<double> s;
  for (u64 n = x + 1; n <= x + H; ++n) s += chi(n);
  return s;
}

WindowCounts window_counts_direct(const Character& chi, u64 H, u64 x) {
  WindowCounts w;
  w.counts.assign(chi.order(), 0);
  for (u64 n = x + 1; n <= x + H; ++n) {
    const u32 j = chi.value_class(n);
    if (j == Character::kZeroClass) {
      ++w.zeros;
    } else {
      ++w.counts[j];
    }
  }
  return w;
}

Fraction exact_second_moment(u64 q, u64 H) {
  if (H < 1 || H >= q) throw PreconditionError("exact_second_moment: need 1 <= H < q");
  Fraction f{H * (q - H), q};
  const u64 g = std::gcd(f.numerator, f.denominator);
  f.numerator /= g;
  f.denominator /= g;
  return f;
}

ComponentStats mean_and_component_variances(const WindowSource& source) {
  struct MomentSums {
    DoubleDouble re, im, re2, im2;
  };
  struct Sink {
    using partial_type = MomentSums;
    double scale;
    partial_type init() const { return {}; }
    void consume(partial_type& p, const SeriesBlock& b) const {
      for (std::size_t i = 0; i < b.size(); ++i) {
        const double r = b.re[i] * scale, m = b.im[i] * scale;
        p.re.add(r);
        p.im.add(m);
        p.re2.add(r * r);
        p.im2.add(m * m);
      }
    }
    void merge(partial_type& a, const partial_type& b) const {
      a.re.add(b.re);
      a.im.add(b.im);
      a.re2.add(b.re2);
      a.im2.add(b.im2);
    }
  };
  const auto result = compute_series(source, Sink{source.scale()});
  const double n = static_cast<double>(source.modulus());
  ComponentStats out;
  out.mean_exactly_zero = result.summary.exact_sum_zero();
  out.mean = out.mean_exactly_zero
                 ? std::complex<double>{}
                 : std::complex<double>{result.value.re.value() / n, result.value.im.value() / n};
  out.var_re = result.value.re2.value() / n - out.mean.real() * out.mean.real();
  out.var_im = result.value.im2.value() / n - out.mean.imag() * out.mean.imag();
  out.second_moment = result.summary.second_moment();
  return out;
}

namespace {

static_assert(std::endian::native == std::endian::little, "dump I/O assumes a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void write_dump(const std::filesystem::path& path, const WindowSource& source) {
  if (source.normalization() != natural_normalization(source.character())) {
    throw PreconditionError("write_dump: the dump stores the natural normalization only");
  }
  const u64 q = source.modulus();
  const u64 H = source.window();
  const u64 k = source.character().exponent();
  if (H > 0xFFFFFFFFu || k > 0xFFFFFFFFu) throw PreconditionError("write_dump: H or k exceeds 32 bits");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os.write("CSUM", 4);
  put<std::uint32_t>(os, kDumpVersion);
  put<std::uint64_t>(os, q);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(H));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(k));
  // Chunks in order; each chunk is converted independently.
  std::vector<float> buf;
  for (u64 c = 0; c < source.num_chunks(); ++c) {
    source.visit_chunk(c, [&](const SeriesBlock& b) {
      buf.resize(2 * b.size());
      for (std::size_t i = 0; i < b.size(); ++i) {
        buf[2 * i] = static_cast<float>(b.re[i]);
        buf[2 * i + 1] = static_cast<float>(b.im[i]);
      }
      os.write(reinterpret_cast<const char*>(buf.data()),
               static_cast<std::streamsize>(buf.size() * sizeof(float)));
    });
  }
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

DumpSeries read_dump(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open dump " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "CSUM", 4) != 0) throw FormatError("bad dump magic");
  const auto version = get<std::uint32_t>(is);
  if (version != kDumpVersion) throw FormatError("unsupported dump version " + std::to_string(version));
  DumpSeries s;
  s.q = get<std::uint64_t>(is);
  s.H = get<std::uint32_t>(is);
  s.k = get<std::uint32_t>(is);
  if (!is || s.q < 3 || s.H < 1 || s.H >= s.q || s.k == 0 || s.k >= s.q - 1) {
    throw FormatError("corrupt dump header");
  }
  s.order = (s.q - 1) / std::gcd(s.k, s.q - 1);
  s.normalization = s.order == 2 ? Normalization::real : Normalization::complex;
  s.scale = normalization_scale(s.normalization, s.H);
  std::vector<float> pairs(2 * s.q);
  is.read(reinterpret_cast<char*>(pairs.data()),
          static_cast<std::streamsize>(pairs.size() * sizeof(float)));
  if (static_cast<std::size_t>(is.gcount()) != pairs.size() * sizeof(float)) {
    throw FormatError("truncated dump body");
  }
  s.re.resize(s.q);
  s.im.resize(s.q);
  for (u64 x = 0; x < s.q; ++x) {
    s.re[x] = pairs[2 * x];
    s.im[x] = pairs[2 * x + 1];
  }
  return s;
}

}  // namespace charsum
