#pragma once

#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace epcgh {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Raised when two geometric objects live in incompatible dimensions.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a scalar argument is outside the documented range.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Reduces an angle to the canonical representative in (-pi, pi].
double canonical_angle(double t);

/// A point of S^1, stored as its canonical representative in (-pi, pi].
class CircleAngle {
 public:
  CircleAngle() = default;
  CircleAngle(double t) : t_(canonical_angle(t)) {}  // NOLINT: implicit by design of use sites

  double value() const { return t_; }
  operator double() const { return t_; }  // NOLINT

 private:
  double t_ = 0.0;
};

/// Unit vector in R^{n+1}, i.e. a point of S^n.
class SpherePoint {
 public:
  /// Validates that `coords` has unit norm (within 1e-12) and length >= 2.
  explicit SpherePoint(std::vector<double> coords);

  /// Normalizes `v`; throws DomainError for the zero vector.
  static SpherePoint normalized(std::vector<double> v);

  int dim() const { return static_cast<int>(coords_.size()) - 1; }
  std::size_t ambient_dim() const { return coords_.size(); }
  std::span<const double> coords() const { return coords_; }
  const std::vector<double>& vec() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  SpherePoint antipode() const;

 private:
  struct Unchecked {};
  SpherePoint(std::vector<double> coords, Unchecked) : coords_(std::move(coords)) {}
  friend SpherePoint make_unchecked(std::vector<double>);

  std::vector<double> coords_;
};

// Hot loops construct points that are unit by construction.
SpherePoint make_unchecked(std::vector<double> coords);

/// Hopf coordinates on S^{2k+1}: pair i of the ambient vector is amps[i] * (cos thetas[i], sin thetas[i]).
struct HopfPoint {
  std::vector<CircleAngle> thetas;
  std::vector<double> amps;

  /// Validates lengths, amps in [0,1] and unit sum of squares; zero amplitudes get angle 0.
  static HopfPoint make(std::vector<double> thetas, std::vector<double> amps);
  int k() const { return static_cast<int>(amps.size()) - 1; }
};

/// Block rotation T_t of R^{2k+2}: pair l is rotated by (2l+1) t, so T_t(gamma(s)) = gamma(s + t).
struct BlockRotation {
  int k = 1;
  CircleAngle t;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

/// arccos of the clamped dot product; no dimension check.
double geodesic_distance_raw(std::span<const double> a, std::span<const double> b);

double geodesic_distance(const SpherePoint& p, const SpherePoint& q);
double circle_distance(double s, double t);

SpherePoint apply_rotation(const BlockRotation& rot, const SpherePoint& p);
/// In-place T_t on a 2k+2 vector (length must already be checked by the caller).
void rotate_in_place(double t, std::span<double> v);

SpherePoint hopf_to_ambient(const HopfPoint& h);
HopfPoint ambient_to_hopf(const SpherePoint& p, int k);

/// SplitMix64 finalizer, used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

using Rng = std::mt19937_64;

/// One uniform point on S^n written into `out` (length n+1) by normalizing a Gaussian vector.
void sample_sphere_into(Rng& rng, std::span<double> out);

std::vector<SpherePoint> sample_sphere(int n, std::size_t count, std::uint64_t seed);
std::vector<SpherePoint> sample_sphere(int n, std::size_t count, Rng& rng);

/// Geodesic step: moves `p` along the tangent vector `v` (not necessarily tangent; it is projected).
std::vector<double> exp_map(std::span<const double> p, std::span<const double> v);

}  // namespace epcgh
