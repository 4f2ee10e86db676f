#pragma once

// Minimal outward-rounded interval arithmetic for the box bounds in the verifier.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace epcgh::detail {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double v) : lo(v), hi(v) {}  // NOLINT
  Interval(double a, double b) : lo(a), hi(b) {}

  double mag() const { return std::max(std::abs(lo), std::abs(hi)); }
};

inline double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

inline Interval widen(double lo, double hi) { return {down(lo), up(hi)}; }

inline Interval operator+(Interval a, Interval b) { return widen(a.lo + b.lo, a.hi + b.hi); }
inline Interval operator-(Interval a, Interval b) { return widen(a.lo - b.hi, a.hi - b.lo); }
inline Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

inline Interval operator*(Interval a, Interval b) {
  const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return widen(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
}

// libm results are within an ulp or two; pad by a few ulps plus a tiny absolute term.
inline Interval pad(double lo, double hi) {
  constexpr double abs_pad = 4e-16;
  return {down(down(lo)) - abs_pad, up(up(hi)) + abs_pad};
}

inline Interval cos(Interval x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (x.hi - x.lo >= two_pi) return {-1.0, 1.0};
  double lo = std::min(std::cos(x.lo), std::cos(x.hi));
  double hi = std::max(std::cos(x.lo), std::cos(x.hi));
  // interior maxima at 2 pi n and minima at pi + 2 pi n
  const double n_max = std::ceil(x.lo / two_pi);
  if (n_max * two_pi <= x.hi) hi = 1.0;
  const double n_min = std::ceil((x.lo - std::numbers::pi) / two_pi);
  if (std::numbers::pi + n_min * two_pi <= x.hi) lo = -1.0;
  const Interval r = pad(lo, hi);
  return {std::max(-1.0, r.lo), std::min(1.0, r.hi)};
}

inline Interval sin(Interval x) { return cos(x - Interval(std::numbers::pi / 2.0)); }

/// Monotone decreasing map v -> (1 + v^2)^p on v >= 0 for p < 0.
inline Interval one_plus_sq_pow(Interval v, double p) {
  const double a = std::max(0.0, v.lo), b = std::max(0.0, v.hi);
  const double fa = std::pow(1.0 + a * a, p), fb = std::pow(1.0 + b * b, p);
  return pad(std::min(fa, fb), std::max(fa, fb));
}

inline Interval abs(Interval x) {
  if (x.lo >= 0) return x;
  if (x.hi <= 0) return -x;
  return {0.0, std::max(-x.lo, x.hi)};
}

}  // namespace epcgh::detail
