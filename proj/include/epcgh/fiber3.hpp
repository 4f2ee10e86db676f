#pragma once

#include <utility>
#include <vector>

#include "epcgh/sphere.hpp"

namespace epcgh {

/// Point q(theta) of the boundary of the Voronoi fiber of gamma_3(0).
struct FiberBoundaryPoint {
  double theta = 0.0;
  double zeta = 0.0;
  SpherePoint ambient;
};

/// Distinct global maxima of P(t) = cos(zeta) cos(t) + sin(zeta) cos(3t - theta).
struct MaximaClass {
  int count = 0;
  std::vector<double> locations;
};

/// arccot(3(3 - 4 sin^2 theta)) on the (0, pi/2] branch; zeta_0 = arccot(9) at theta = 0.
double fiber3_zeta(double theta);
double fiber3_zeta_prime(double theta);
inline double zeta0() { return fiber3_zeta(0.0); }

/// Closed-form boundary point, valid on the closed range [-pi/3, pi/3].
std::vector<double> qbar(double theta);

/// theta in [-pi/3, pi/3).
FiberBoundaryPoint fiber3_boundary(double theta);

/// Grid check that t = 0 is a global maximum of the support function at `p` and that a second one exists.
bool fiber3_has_double_max(const FiberBoundaryPoint& p, int grid = 20000);

MaximaClass classify_maxima(double zeta, double theta, int grid = 20000);

/// The two maxima t_- < t_+ of P for theta = pi, valid for arccot(9) < zeta <= pi/2.
std::pair<double, double> double_max_locations(double zeta);

/// d(q(theta), gamma_3(0)) for theta in [-pi/3, pi/3].
double rho3(double theta);

struct Rho3Extrema {
  double max_value, argmax, min_value, argmin;
};
Rho3Extrema rho3_extrema(int grid = 20000);

struct Disc3Witness {
  SpherePoint q;
  SpherePoint q_prime;
  double residual = 0.0;  // |q - T_t q'|
};
/// (q(t/2), q(-t/2)) for t in [0, 2pi/3]; q(t/2) = T_t q(-t/2) puts it in both boundaries.
Disc3Witness disc3_witness(double t);

/// min over theta, theta' of |q(theta) - T_t q(theta')|: zero exactly when the rotated boundary meets the original.
double rotated_boundary_gap(double t, int grid = 400);

}  // namespace epcgh
