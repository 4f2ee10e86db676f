#include "epcgh/sphere.hpp"

#include <algorithm>
#include <cmath>

namespace epcgh {

double canonical_angle(double t) {
  if (!std::isfinite(t)) throw DomainError("angle must be finite");
  double r = std::remainder(t, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

SpherePoint::SpherePoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw DimensionError("sphere point needs at least 2 coordinates");
  const double n = norm(coords_);
  if (std::abs(n - 1.0) > 1e-12) throw DomainError("sphere point must have unit norm");
}

SpherePoint SpherePoint::normalized(std::vector<double> v) {
  if (v.size() < 2) throw DimensionError("sphere point needs at least 2 coordinates");
  const double n = norm(v);
  if (!(n > 0.0)) throw DomainError("cannot normalize the zero vector");
  for (double& x : v) x /= n;
  return SpherePoint(std::move(v), Unchecked{});
}

SpherePoint SpherePoint::antipode() const {
  std::vector<double> v = coords_;
  for (double& x : v) x = -x;
  return SpherePoint(std::move(v), Unchecked{});
}

SpherePoint make_unchecked(std::vector<double> coords) {
  return SpherePoint(std::move(coords), SpherePoint::Unchecked{});
}

HopfPoint HopfPoint::make(std::vector<double> thetas, std::vector<double> amps) {
  if (thetas.size() != amps.size() || amps.empty())
    throw DimensionError("hopf point needs matching, nonempty angle and amplitude lists");
  double s = 0.0;
  for (double a : amps) {
    if (a < 0.0 || a > 1.0) throw DomainError("hopf amplitudes must lie in [0,1]");
    s += a * a;
  }
  if (std::abs(s - 1.0) > 1e-12) throw DomainError("hopf amplitudes must have unit sum of squares");
  HopfPoint h;
  h.amps = std::move(amps);
  h.thetas.reserve(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i)
    h.thetas.emplace_back(h.amps[i] == 0.0 ? 0.0 : thetas[i]);
  return h;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double geodesic_distance_raw(std::span<const double> a, std::span<const double> b) {
  return std::acos(std::clamp(dot(a, b), -1.0, 1.0));
}

double geodesic_distance(const SpherePoint& p, const SpherePoint& q) {
  if (p.ambient_dim() != q.ambient_dim())
    throw DimensionError("geodesic distance between points of different spheres");
  return geodesic_distance_raw(p.coords(), q.coords());
}

double circle_distance(double s, double t) {
  const double d = std::fmod(std::abs(s - t), kTwoPi);
  return std::min(d, kTwoPi - d);
}

void rotate_in_place(double t, std::span<double> v) {
  const std::size_t pairs = v.size() / 2;
  for (std::size_t l = 0; l < pairs; ++l) {
    const double a = static_cast<double>(2 * l + 1) * t;
    const double c = std::cos(a), s = std::sin(a);
    const double x = v[2 * l], y = v[2 * l + 1];
    v[2 * l] = c * x - s * y;
    v[2 * l + 1] = s * x + c * y;
  }
}

SpherePoint apply_rotation(const BlockRotation& rot, const SpherePoint& p) {
  if (rot.k < 0 || p.ambient_dim() != static_cast<std::size_t>(2 * rot.k + 2))
    throw DimensionError("block rotation T_t needs a point of S^{2k+1}");
  std::vector<double> v = p.vec();
  rotate_in_place(rot.t, v);
  return make_unchecked(std::move(v));
}

SpherePoint hopf_to_ambient(const HopfPoint& h) {
  std::vector<double> v(2 * h.amps.size());
  for (std::size_t i = 0; i < h.amps.size(); ++i) {
    v[2 * i] = h.amps[i] * std::cos(h.thetas[i].value());
    v[2 * i + 1] = h.amps[i] * std::sin(h.thetas[i].value());
  }
  return make_unchecked(std::move(v));
}

HopfPoint ambient_to_hopf(const SpherePoint& p, int k) {
  if (k < 0 || p.ambient_dim() != static_cast<std::size_t>(2 * k + 2))
    throw DimensionError("hopf coordinates need a point of S^{2k+1}");
  HopfPoint h;
  for (int i = 0; i <= k; ++i) {
    const double x = p[2 * i], y = p[2 * i + 1];
    const double a = std::hypot(x, y);
    h.amps.push_back(a);
    h.thetas.emplace_back(a > 0.0 ? std::atan2(y, x) : 0.0);
  }
  return h;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void sample_sphere_into(Rng& rng, std::span<double> out) {
  std::normal_distribution<double> g(0.0, 1.0);
  double n = 0.0;
  do {
    for (double& x : out) x = g(rng);
    n = norm(out);
  } while (n < 1e-300);
  for (double& x : out) x /= n;
}

std::vector<SpherePoint> sample_sphere(int n, std::size_t count, Rng& rng) {
  if (n < 1) throw DomainError("sphere dimension must be at least 1");
  std::vector<SpherePoint> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> v(static_cast<std::size_t>(n) + 1);
    sample_sphere_into(rng, v);
    pts.push_back(make_unchecked(std::move(v)));
  }
  return pts;
}

std::vector<SpherePoint> sample_sphere(int n, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  return sample_sphere(n, count, rng);
}

std::vector<double> exp_map(std::span<const double> p, std::span<const double> v) {
  std::vector<double> w(v.begin(), v.end());
  const double c = dot(p, w);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * p[i];
  const double r = norm(w);
  std::vector<double> out(p.begin(), p.end());
  if (r == 0.0) return out;
  const double cr = std::cos(r), sr = std::sin(r) / r;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = cr * p[i] + sr * w[i];
  const double n = norm(out);
  for (double& x : out) x /= n;
  return out;
}

}  // namespace epcgh
