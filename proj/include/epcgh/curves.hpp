#pragma once

#include <vector>

#include "epcgh/sphere.hpp"

namespace epcgh {

/// delta_k = 2 pi k / (2k+1), the edge length of the regular (2k+1)-gon.
double delta_k(int k);

/// zeta_m = arccos(-1/(m+1)), the edge angle of the regular simplex in S^m.
double zeta_m(int m);

/// Odd trigonometric moment curve S^1 -> S^{2k+1}.
struct TmcOdd {
  int k = 1;
  SpherePoint operator()(double t) const;
};

/// Even trigonometric moment curve S^1 -> S^{2k}.
struct TmcEven {
  int k = 1;
  SpherePoint operator()(double t) const;
};

/// The S^1 -> S^2 curve with a 0.15 cos(3t) height profile.
struct AlphaCurve {
  static constexpr double amplitude = 0.15;
  SpherePoint operator()(double t) const;
};

/// The S^2 -> S^3 surface lifting the round sphere by w = (1/3) sin(theta) sin(2 theta) cos(2 phi).
struct SigmaSurface {
  SpherePoint operator()(double phi, double theta) const;
};

SpherePoint gamma_odd(int k, double t);
void gamma_odd_into(int k, double t, std::span<double> out);
std::vector<double> gamma_odd_derivative(int k, double t);

SpherePoint gamma_even(int k, double t);
void gamma_even_into(int k, double t, std::span<double> out);

/// Closed form sin(2(k+1)t) / (2(k+1) sin t), with a Taylor branch near 0 and pi.
double h_closed(int k, double t);
/// (1/(k+1)) sum_{l=0}^{k} cos((2l+1)t).
double h_sum(int k, double t);

/// q . gamma_odd(k, t), evaluated through the Hopf coordinates of q.
double support_P(int k, const SpherePoint& q, double t);

SpherePoint alpha_curve(double t);
void alpha_into(double t, std::span<double> out);

SpherePoint sigma_surface(double phi, double theta);
void sigma_into(double phi, double theta, std::span<double> out);
/// Lift of an arbitrary point u of S^2 (given in R^3) to the sigma surface.
void sigma_from_unit(const double* u, std::span<double> out);

}  // namespace epcgh
