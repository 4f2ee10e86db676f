#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epcgh/curves.hpp"
#include "epcgh/sphere.hpp"

namespace epcgh {

enum class EmbeddingKind { TmcOdd, TmcEven, Alpha, Sigma, Equatorial };

/// Domain parameter: an angle `a` for curves, or (phi, theta) = (a, b) for surfaces.
struct Param {
  double a = 0.0;
  double b = 0.0;
};

/// An embedding of S^m into S^n together with the correspondence it induces.
struct EpcSpec {
  std::string name;
  EmbeddingKind kind = EmbeddingKind::TmcOdd;
  int k = 1;
  int domain_dim = 1;
  int ambient_dim = 3;

  static EpcSpec tmc_odd(int k);
  static EpcSpec tmc_even(int k);
  static EpcSpec alpha();
  static EpcSpec sigma();
  /// S^m inside S^n as the first m+1 coordinates; m is 1 or 2.
  static EpcSpec equatorial(int m, int n);
  /// Parses "tmc-odd:K", "tmc-even:K", "alpha", "sigma", "equatorial:M:N".
  static EpcSpec parse(const std::string& text);

  std::size_t ambient_size() const { return static_cast<std::size_t>(ambient_dim) + 1; }
  void embed_into(const Param& p, std::span<double> out) const;
  SpherePoint embed(const Param& p) const;
  /// Geodesic distance in the domain sphere.
  double domain_distance(const Param& p, const Param& q) const;
  Param canonical(const Param& p) const;
};

struct ProjectionResult {
  Param argmin_param;
  double distance = 0.0;
  std::vector<Param> near_ties;
};

/// One element (x, y) of the correspondence R.
struct CorrElement {
  Param x;
  std::vector<double> y;
};

struct DistortionEstimate {
  double value = 0.0;
  CorrElement witness_a;
  CorrElement witness_b;
  std::uint64_t samples_used = 0;
  int refinement_level = 0;
};

struct DiscEstimate {
  double value = 0.0;
  std::vector<double> y;         // point whose near-tie set realizes the value
  std::vector<Param> tie_params;
  std::uint64_t samples_used = 0;
};

inline constexpr int kDefaultGrid = 512;
inline constexpr double kDefaultTieTol = 1e-6;

/// Closest-point projection onto the image of an embedding, with a precomputed parameter grid.
class Projector {
 public:
  explicit Projector(EpcSpec spec, int grid = kDefaultGrid, double tie_tol = kDefaultTieTol);

  const EpcSpec& spec() const { return spec_; }
  double tie_tol() const { return tie_tol_; }

  ProjectionResult project(std::span<const double> y) const { return project(y, tie_tol_); }
  ProjectionResult project(std::span<const double> y, double tie_tol) const;
  Param psi(std::span<const double> y) const;
  double distance(std::span<const double> y) const;

  /// Refined local maxima of y . embed(.), best first; basins provably below best - margin (in
  /// distance) are skipped unless `all` is set.
  struct Basin {
    Param param;
    double dot = 0.0;
  };
  std::vector<Basin> basins(std::span<const double> y, double margin, bool all = false) const;

 private:
  void check_dim(std::span<const double> y) const;
  Basin refine_curve(std::span<const double> y, std::size_t i) const;
  Basin refine_surface(std::span<const double> y, std::size_t i) const;
  Param grid_param(std::size_t i) const;
  void grid_dots(std::span<const double> y, std::vector<double>& dots) const;
  std::vector<Param> plateau_ties(std::span<const double> y, const std::vector<double>& dots,
                                  double cutoff, const std::vector<Param>& listed) const;

  EpcSpec spec_;
  double tie_tol_;
  std::size_t n1_ = 0, n2_ = 1;  // grid shape: n1 along t or phi, n2 along theta
  std::vector<double> table_;    // grid points, one row per point
  std::vector<double> cols_;     // same, one row per ambient coordinate
  std::vector<double> units_;    // surface grids: domain unit vectors
  double curvature_bound_ = 0.0; // upper bound on the second derivative of the support function
  double step_ = 0.0;            // largest grid spacing in domain distance
};

ProjectionResult project(const EpcSpec& spec, const SpherePoint& y, int grid = kDefaultGrid,
                         double tie_tol = kDefaultTieTol);
Param psi(const EpcSpec& spec, const SpherePoint& y);

/// Max of the projection distance over `samples` uniform points: a lower bound on the covering radius.
double covering_radius(const EpcSpec& spec, std::uint64_t samples, std::uint64_t seed, int threads = 0);

/// Uniform points of S^{2k+1} rotated into the fiber over t = 0.
std::vector<SpherePoint> fiber0_samples(int k, std::size_t count, std::uint64_t seed);

/// Lower estimate of dis(R) for the spec; `budget` projections per search phase, rounded up to whole rounds.
DistortionEstimate estimate_distortion(const EpcSpec& spec, std::uint64_t budget, std::uint64_t seed,
                                       bool refine = true, int threads = 0);

/// Lower estimate of the modulus of discontinuity of psi via near-tie diameters.
DiscEstimate disc_estimate_full(const EpcSpec& spec, std::uint64_t budget, std::uint64_t seed,
                                int threads = 0);
double disc_estimate(const EpcSpec& spec, std::uint64_t budget, std::uint64_t seed, int threads = 0);

/// sup over t in (0, pi) of |arccos(h_k(t)) - t|, the distortion of the curve restricted to itself.
double dis_gamma(int k);
/// Same, also returning the maximizing t.
double dis_gamma(int k, double* argmax);

/// Distortion of the finite relation given by `elements`.
double relation_distortion(const EpcSpec& spec, const std::vector<CorrElement>& elements);

/// |d_m(a.x, b.x) - d_n(a.y, b.y)|.
double pair_distortion(const EpcSpec& spec, const CorrElement& a, const CorrElement& b);

/// Worker count used when a `threads` argument is 0.
int default_threads();
void set_default_threads(int n);

}  // namespace epcgh
