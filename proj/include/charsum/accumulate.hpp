#pragma once

#include <cmath>

namespace charsum {

/// Double-double accumulator (Knuth two-sum on the head, error folded into
/// a tail). Roughly 106 significant bits for sums of doubles.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  void add(double x) {
    const double s = hi + x;
    const double bp = s - hi;
    const double err = (hi - (s - bp)) + (x - bp);
    const double t = lo + err;
    hi = s + t;
    lo = t - (hi - s);
  }

  void add(const DoubleDouble& o) {
    add(o.hi);
    add(o.lo);
  }

  double value() const { return hi + lo; }
};

/// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }

  void reset(double v) {
    sum = v;
    comp = 0.0;
  }
};

}  // namespace charsum
