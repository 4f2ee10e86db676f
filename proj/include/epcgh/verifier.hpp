#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "epcgh/sphere.hpp"

namespace epcgh {

/// Axis-aligned box in (theta, theta', t).
struct Box {
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};
  int depth = 0;
  double bound = 0.0;  // certified upper bound of the objective on the box
};

struct VerificationReport {
  std::string condition;
  bool certified = false;
  double sup_bound = 0.0;
  double slack = 0.0;
  std::vector<Box> worst_boxes;
  std::uint64_t boxes_processed = 0;
  int max_depth = 0;
  int depth_limit = 0;
  std::uint64_t undischarged = 0;
  bool budget_exhausted = false;
};

/// Explicit bounds on the partial derivatives of g over the whole domain (10% margin included).
struct LipschitzConstants {
  static constexpr double zeta_prime_max = 10.43;  // sup |d zeta / d theta| on [-pi/3, pi/3] is 10.42352, near theta = 1.04196
  static constexpr double theta = 1.1 * (3.0 + zeta_prime_max);
  static constexpr double theta_p = theta;
  static constexpr double t = 1.1 * (3.0 + 1.0);
};

/// F_t = cos(u) cos(zeta) cos(zeta') + cos(3u) sin(zeta) sin(zeta') with u = theta - theta' + t.
double objective_Ft(double theta, double theta_p, double t);

/// Which of the two inequalities: `Upper` is t in [2pi/3, pi] against cos(t - 2pi/3),
/// `Lower` is t in [-pi, -2pi/3] against cos(t + 2pi/3).
enum class BstarCondition { Upper, Lower };

/// g = F_t - cos(t -+ 2pi/3); the conditions say g <= 0 on their boxes.
double bstar_objective(BstarCondition c, double theta, double theta_p, double t);
std::array<double, 3> bstar_gradient(BstarCondition c, double theta, double theta_p, double t);

/// Certified upper bound of g on a box.
double box_upper_bound(BstarCondition c, const Box& b);

Box bstar_domain(BstarCondition c);

struct VerifyOptions {
  double slack = 1e-6;
  int max_depth = 50;
  std::uint64_t max_boxes = 50'000'000;
  std::size_t keep_worst = 16;
  int threads = 0;
};

VerificationReport verify_condition(BstarCondition c, const VerifyOptions& opt);
std::pair<VerificationReport, VerificationReport> verify_Bstar_k1(const VerifyOptions& opt);
std::pair<VerificationReport, VerificationReport> verify_Bstar_k1(double slack, int max_depth);

/// Largest g over `samples` uniform triples of the condition's box.
double sampled_max_objective(BstarCondition c, std::uint64_t samples, std::uint64_t seed, int threads = 0);

struct BCheck {
  bool pass = false;
  double worst_violation = 0.0;
};

/// B(delta) on the sample set: |t| <= d(q, T_t q') + delta for all pairs and all grid t with |t| in [delta, pi].
BCheck check_B_sampled(int k, double delta, const std::vector<SpherePoint>& fiber_samples, int t_grid,
                       double tol = 1e-9);

struct ABound {
  double bound = 0.0;  // pi - d_antipodal
  bool applies = false;
  bool holds = false;
};

/// The A-side bound obtained from d(q, T_t q') + d(q, T_{t - pi} q') = pi.
ABound derive_A_from_B(double delta, double t, double d_antipodal);

/// JSON transcript of a pair of reports.
std::string transcript_json(const VerificationReport& upper, const VerificationReport& lower);

}  // namespace epcgh
