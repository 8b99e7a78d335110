#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace bmospline {

// Pairwise (cascade) summation: deterministic for a fixed input order and
// much better conditioned than a running sum for long vectors.
double pairwise_sum(std::span<const double> v);

// Shortest round-trip decimal form ("%.17g" trimmed by the C library).
std::string format_double(double x);

std::uint64_t fnv1a(std::string_view s);
std::string to_hex(std::uint64_t v);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares of y against x.  Needs at least two points.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace bmospline
