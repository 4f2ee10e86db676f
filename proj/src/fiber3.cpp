#include "epcgh/fiber3.hpp"

#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "epcgh/curves.hpp"

namespace epcgh {

namespace {

constexpr double kThird = kPi / 3.0;

void check_closed(double theta) {
  if (!(theta >= -kThird - 1e-15 && theta <= kThird + 1e-15))
    throw DomainError("theta must lie in [-pi/3, pi/3]");
}

}  // namespace

double fiber3_zeta(double theta) {
  const double s = std::sin(theta);
  const double x = 3.0 * (3.0 - 4.0 * s * s);
  // arccot on (0, pi/2]; the argument is nonnegative on the fiber range
  return std::atan2(1.0, x);
}

double fiber3_zeta_prime(double theta) {
  const double x = 3.0 + 6.0 * std::cos(2.0 * theta);
  return 12.0 * std::sin(2.0 * theta) / (1.0 + x * x);
}

std::vector<double> qbar(double theta) {
  check_closed(theta);
  const double z = fiber3_zeta(theta);
  const double cz = std::cos(z), sz = std::sin(z);
  return {std::cos(theta) * cz, std::sin(theta) * cz, -std::cos(3.0 * theta) * sz,
          -std::sin(3.0 * theta) * sz};
}

FiberBoundaryPoint fiber3_boundary(double theta) {
  if (!(theta >= -kThird && theta < kThird)) throw DomainError("theta must lie in [-pi/3, pi/3)");
  return {theta, fiber3_zeta(theta), make_unchecked(qbar(theta))};
}

bool fiber3_has_double_max(const FiberBoundaryPoint& p, int grid) {
  // The second maximum sits at t = 2 theta by construction.
  const double at0 = dot(p.ambient.coords(), gamma_odd(1, 0.0).coords());
  const double at2 = dot(p.ambient.coords(), gamma_odd(1, 2.0 * p.theta).coords());
  if (std::abs(at0 - at2) > 1e-10) return false;
  double m = -2.0, mt = 0.0;
  std::vector<double> g(4);
  for (int i = 0; i < grid; ++i) {
    const double t = -kPi + kTwoPi * (i + 1) / grid;
    gamma_odd_into(1, t, g);
    const double v = dot(p.ambient.coords(), g);
    if (v > m) {
      m = v;
      mt = t;
    }
  }
  (void)mt;
  return m <= at0 + 1e-9;
}

MaximaClass classify_maxima(double zeta, double theta, int grid) {
  if (!(zeta >= 0.0 && zeta <= kPi / 2.0)) throw DomainError("zeta must lie in [0, pi/2]");
  if (grid < 10000) throw DomainError("classification grid must have at least 10^4 points");
  const double cz = std::cos(zeta), sz = std::sin(zeta);
  auto P = [&](double t) { return cz * std::cos(t) + sz * std::cos(3.0 * t - theta); };
  std::vector<double> v(static_cast<std::size_t>(grid));
  const double h = kTwoPi / grid;
  for (int i = 0; i < grid; ++i) v[i] = P(-kPi + h * (i + 1));
  const double gmax = *std::max_element(v.begin(), v.end());
  std::vector<std::pair<double, double>> polished;
  for (int i = 0; i < grid; ++i) {
    const int p = (i + grid - 1) % grid, q = (i + 1) % grid;
    const bool is_max = (v[i] > v[p] || (v[i] == v[p] && i < p)) && (v[i] > v[q] || (v[i] == v[q] && i < q));
    if (!is_max || v[i] < gmax - 1e-4) continue;
    const double t0 = -kPi + h * (i + 1);
    auto [t, val] = detail::golden_max(P, t0 - h, t0 + h, 1e-12);
    if (val < v[i]) {
      t = t0;
      val = v[i];
    }
    // golden section stalls near 1e-8 in t; finish with Newton on P'
    for (int it = 0; it < 4; ++it) {
      const double d1 = -cz * std::sin(t) - 3.0 * sz * std::sin(3.0 * t - theta);
      const double d2 = -cz * std::cos(t) - 9.0 * sz * std::cos(3.0 * t - theta);
      if (!(d2 < 0.0)) break;
      const double step = d1 / d2;
      if (std::abs(step) > h) break;
      t -= step;
    }
    val = P(t);
    polished.emplace_back(canonical_angle(t), val);
  }
  double best = -2.0;
  for (auto& pv : polished) best = std::max(best, pv.second);
  MaximaClass out;
  for (auto& [t, val] : polished) {
    if (val < best - 1e-10) continue;
    bool dup = false;
    for (double s : out.locations)
      if (circle_distance(s, t) < 1e-6) dup = true;
    if (!dup) out.locations.push_back(t);
  }
  std::sort(out.locations.begin(), out.locations.end());
  out.count = static_cast<int>(out.locations.size());
  return out;
}

std::pair<double, double> double_max_locations(double zeta) {
  if (!(zeta > zeta0() && zeta <= kPi / 2.0))
    throw DomainError("double maxima exist only for arccot(9) < zeta <= pi/2");
  const double cot = std::cos(zeta) / std::sin(zeta);
  const double s = std::asin(std::sqrt(std::clamp((3.0 - cot / 3.0) / 4.0, 0.0, 1.0)));
  return {-s, s};
}

double rho3(double theta) {
  const std::vector<double> q = qbar(theta);
  return geodesic_distance_raw(q, gamma_odd(1, 0.0).coords());
}

Rho3Extrema rho3_extrema(int grid) {
  if (grid < 2) throw DomainError("rho3 grid needs at least 2 points");
  Rho3Extrema e{-1.0, 0.0, 10.0, 0.0};
  const double h = 2.0 * kThird / (grid - 1);
  int imax = 0, imin = 0;
  for (int i = 0; i < grid; ++i) {
    const double th = std::min(kThird, -kThird + h * i);
    const double r = rho3(th);
    if (r > e.max_value) {
      e.max_value = r;
      imax = i;
    }
    if (r < e.min_value) {
      e.min_value = r;
      imin = i;
    }
  }
  auto clampth = [](double t) { return std::clamp(t, -kThird, kThird); };
  const double tmax = -kThird + h * imax, tmin = -kThird + h * imin;
  auto [am, vm] = detail::golden_max([&](double t) { return rho3(clampth(t)); }, clampth(tmax - h),
                                     clampth(tmax + h), 1e-12);
  if (vm > e.max_value) {
    e.max_value = vm;
    e.argmax = am;
  } else {
    e.argmax = tmax;
  }
  auto [an, vn] = detail::golden_max([&](double t) { return -rho3(clampth(t)); }, clampth(tmin - h),
                                     clampth(tmin + h), 1e-12);
  if (-vn < e.min_value) {
    e.min_value = -vn;
    e.argmin = an;
  } else {
    e.argmin = tmin;
  }
  return e;
}

Disc3Witness disc3_witness(double t) {
  if (!(t >= 0.0 && t <= 2.0 * kThird + 1e-15))
    throw DomainError("boundaries over 0 and t meet only for t in [0, 2pi/3]");
  const double half = std::min(t / 2.0, kThird);
  std::vector<double> q = qbar(half), qp = qbar(-half);
  std::vector<double> r = qp;
  rotate_in_place(t, r);
  double res = 0.0;
  for (int i = 0; i < 4; ++i) res = std::max(res, std::abs(q[i] - r[i]));
  return {make_unchecked(std::move(q)), make_unchecked(std::move(qp)), res};
}

double rotated_boundary_gap(double t, int grid) {
  if (grid < 8) throw DomainError("gap grid needs at least 8 points per axis");
  std::vector<std::vector<double>> pts(static_cast<std::size_t>(grid));
  std::vector<std::vector<double>> rot(static_cast<std::size_t>(grid));
  const double h = 2.0 * kThird / (grid - 1);
  for (int i = 0; i < grid; ++i) {
    const double th = std::min(kThird, -kThird + h * i);
    pts[i] = qbar(th);
    rot[i] = pts[i];
    rotate_in_place(t, rot[i]);
  }
  double best = 1e300;
  int bi = 0, bj = 0;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      double s = 0.0;
      for (int c = 0; c < 4; ++c) {
        const double d = pts[i][c] - rot[j][c];
        s += d * d;
      }
      if (s < best) {
        best = s;
        bi = i;
        bj = j;
      }
    }
  auto gap2 = [&](const double* x) {
    const double a = std::clamp(x[0], -kThird, kThird), b = std::clamp(x[1], -kThird, kThird);
    std::vector<double> p = qbar(a), r = qbar(b);
    rotate_in_place(t, r);
    double s = 0.0;
    for (int c = 0; c < 4; ++c) s += (p[c] - r[c]) * (p[c] - r[c]);
    return s;
  };
  std::vector<double> x{-kThird + h * bi, -kThird + h * bj};
  const double polished = detail::nelder_mead(gap2, x, 0.5 * h, 1e-13, 2000);
  return std::sqrt(std::max(0.0, std::min(best, polished)));
}

}  // namespace epcgh
