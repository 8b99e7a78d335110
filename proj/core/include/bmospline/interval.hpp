#pragma once

#include <algorithm>
#include <stdexcept>

namespace bmospline {

// Closed interval [lo, hi] on the real line.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool contains(const Interval& o) const { return o.lo >= lo && o.hi <= hi; }
  bool valid() const { return hi > lo; }

  Interval clipped_to(const Interval& o) const {
    return {std::max(lo, o.lo), std::min(hi, o.hi)};
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline Interval make_interval(double a, double b) {
  if (!(b > a)) throw std::invalid_argument("interval endpoints must satisfy lo < hi");
  return {a, b};
}

}  // namespace bmospline
