#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpcert {

// A point is a finite-dimensional real vector.
using Point = std::vector<double>;

// Distances at or below this are treated as zero: the two points are deemed
// equal for the purpose of strict contraction inequalities.
inline constexpr double kMinPositiveDistance = 1e-300;

// Strict inequalities are asserted with margin 0; an observed gap below this
// is reported as fragile (a near-tie), not as a failure.
inline constexpr double kFragileGap = 1e-12;

// Threshold for "strictly positive" verdicts on finite limit estimates.
// Estimates below it cannot be distinguished from a vanishing limit.
inline constexpr double kPositiveTol = 1e-9;

// Unbounded domain axes are sampled on [lower, lower + reach].
inline constexpr double kDefaultReach = 100.0;

// Iteration traces keep at most this many points; step distances are always
// kept in full.
inline constexpr std::size_t kTracePointCap = 100000;

inline double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }
inline double infinity() { return std::numeric_limits<double>::infinity(); }

// Deterministic text form for doubles: 17 significant digits round-trip.
inline std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string fmt_point(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += fmt_double(p[i]);
  }
  s += ")";
  return s;
}

// Uniform double in [0, 1) built from the top 53 bits of the generator
// output, so results do not depend on the standard library's distribution
// implementation.
inline double uniform01(std::mt19937_64& gen) {
  return std::ldexp(static_cast<double>(gen() >> 11), -53);
}

inline double uniform_in(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform01(gen);
}

// Logarithmically spaced grid with n points from lo to hi inclusive.
inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) {
    throw std::invalid_argument("log_grid: need 0 < lo < hi and n >= 2");
  }
  std::vector<double> g(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                              static_cast<double>(n - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (!(hi >= lo) || n < 2) {
    throw std::invalid_argument("linear_grid: need hi >= lo and n >= 2");
  }
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return g;
}

}  // namespace fpcert
