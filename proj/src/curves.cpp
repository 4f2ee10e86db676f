#include "epcgh/curves.hpp"

#include <cmath>

namespace epcgh {

double delta_k(int k) { return kTwoPi * k / (2.0 * k + 1.0); }

double zeta_m(int m) { return std::acos(-1.0 / (m + 1.0)); }

void gamma_odd_into(int k, double t, std::span<double> out) {
  const double s = 1.0 / std::sqrt(k + 1.0);
  for (int l = 0; l <= k; ++l) {
    const double a = (2 * l + 1) * t;
    out[2 * l] = s * std::cos(a);
    out[2 * l + 1] = s * std::sin(a);
  }
}

SpherePoint gamma_odd(int k, double t) {
  if (k < 1) throw DomainError("gamma_odd needs k >= 1");
  std::vector<double> v(2 * k + 2);
  gamma_odd_into(k, t, v);
  return make_unchecked(std::move(v));
}

std::vector<double> gamma_odd_derivative(int k, double t) {
  if (k < 1) throw DomainError("gamma_odd needs k >= 1");
  const double s = 1.0 / std::sqrt(k + 1.0);
  std::vector<double> v(2 * k + 2);
  for (int l = 0; l <= k; ++l) {
    const double m = 2 * l + 1;
    v[2 * l] = -s * m * std::sin(m * t);
    v[2 * l + 1] = s * m * std::cos(m * t);
  }
  return v;
}

void gamma_even_into(int k, double t, std::span<double> out) {
  const double c = std::cos((2 * k + 1) * t);
  const double s = 1.0 / std::sqrt(k + c * c);
  for (int l = 0; l < k; ++l) {
    const double a = (2 * l + 1) * t;
    out[2 * l] = s * std::cos(a);
    out[2 * l + 1] = s * std::sin(a);
  }
  out[2 * k] = s * c;
}

SpherePoint gamma_even(int k, double t) {
  if (k < 1) throw DomainError("gamma_even needs k >= 1");
  std::vector<double> v(2 * k + 1);
  gamma_even_into(k, t, v);
  return make_unchecked(std::move(v));
}

SpherePoint TmcOdd::operator()(double t) const { return gamma_odd(k, t); }
SpherePoint TmcEven::operator()(double t) const { return gamma_even(k, t); }

namespace {

// sin(N u) / (N sin u) for small |u|
double h_series(double n, double u) {
  const double u2 = u * u;
  const double n2 = n * n;
  return 1.0 + u2 * (1.0 - n2) / 6.0 + u2 * u2 * (7.0 / 360.0 - n2 / 36.0 + n2 * n2 / 120.0);
}

}  // namespace

double h_closed(int k, double t) {
  if (k < 0) throw DomainError("h_k needs k >= 0");
  const double n = 2.0 * (k + 1);
  const double u = canonical_angle(t);
  if (std::abs(u) < 1e-8) return h_series(n, u);
  const double v = u > 0 ? u - kPi : u + kPi;
  if (std::abs(v) < 1e-8) return -h_series(n, v);
  // near pi, sin(u) loses relative accuracy; n is even, so shift by pi
  if (std::abs(u) > kPi / 2.0) return -std::sin(n * v) / (n * std::sin(v));
  return std::sin(n * u) / (n * std::sin(u));
}

double h_sum(int k, double t) {
  if (k < 0) throw DomainError("h_k needs k >= 0");
  double s = 0.0;
  for (int l = 0; l <= k; ++l) s += std::cos((2 * l + 1) * t);
  return s / (k + 1);
}

double support_P(int k, const SpherePoint& q, double t) {
  if (k < 1 || q.ambient_dim() != static_cast<std::size_t>(2 * k + 2))
    throw DimensionError("support function needs a point of S^{2k+1}");
  const HopfPoint h = ambient_to_hopf(q, k);
  double s = 0.0;
  for (int l = 0; l <= k; ++l) s += h.amps[l] * std::cos((2 * l + 1) * t - h.thetas[l].value());
  return s / std::sqrt(k + 1.0);
}

void alpha_into(double t, std::span<double> out) {
  const double z = AlphaCurve::amplitude * std::cos(3.0 * t);
  const double r = std::sqrt(1.0 - z * z);
  out[0] = std::cos(t) * r;
  out[1] = std::sin(t) * r;
  out[2] = z;
}

SpherePoint alpha_curve(double t) {
  std::vector<double> v(3);
  alpha_into(t, v);
  return make_unchecked(std::move(v));
}

SpherePoint AlphaCurve::operator()(double t) const { return alpha_curve(t); }

void sigma_from_unit(const double* u, std::span<double> out) {
  const double w = (2.0 / 3.0) * u[2] * (u[0] * u[0] - u[1] * u[1]);
  const double r = std::sqrt(1.0 - w * w);
  out[0] = u[0] * r;
  out[1] = u[1] * r;
  out[2] = u[2] * r;
  out[3] = w;
}

void sigma_into(double phi, double theta, std::span<double> out) {
  const double st = std::sin(theta);
  const double u[3] = {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
  const double w = std::sin(theta) * std::sin(2.0 * theta) * std::cos(2.0 * phi) / 3.0;
  const double r = std::sqrt(1.0 - w * w);
  out[0] = u[0] * r;
  out[1] = u[1] * r;
  out[2] = u[2] * r;
  out[3] = w;
}

SpherePoint sigma_surface(double phi, double theta) {
  if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("sigma surface needs theta in [0, pi]");
  std::vector<double> v(4);
  sigma_into(phi, theta, v);
  return make_unchecked(std::move(v));
}

SpherePoint SigmaSurface::operator()(double phi, double theta) const {
  return sigma_surface(phi, theta);
}

}  // namespace epcgh
