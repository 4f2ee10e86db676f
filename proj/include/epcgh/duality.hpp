#pragma once

#include <vector>

#include "epcgh/sphere.hpp"

namespace epcgh {

/// Candidate face of Conv(gamma_{2k+1}): its vertex parameters on the curve gamma_{2k+1}.
/// `k` is the curve index, so the polytope is B_{2k+2}.
struct FaceCandidate {
  std::vector<double> params;
  int k = 1;

  /// Validates k >= 1, a nonempty list and pairwise circle distance >= 1e-9.
  static FaceCandidate make(int k, std::vector<double> params);
};

/// Exposed-edge criterion for B_{2k} = Conv(gamma_{2k-1}): d_1(t1, t2) <= delta_{k-1}. Here k is the polytope index.
bool edge_predicate(int k, double t1, double t2);

struct DualityWitness {
  bool found = false;
  std::vector<double> center;
  double radius = 0.0;
  double equidistance_error = 0.0;  // spread of the distances to the face vertices
  double min_curve_distance = 0.0;  // closest grid point of the curve to the center
};

/// Searches for a point equidistant from every vertex and no closer to any other curve point.
DualityWitness duality_witness(const FaceCandidate& face, int grid = 10000);

/// Distance from (0,0,cos 3t, sin 3t) to the vertices gamma_3(t), gamma_3(t +- 2pi/3); k must be 1.
double triangle_center_distance(int k, double t);

/// Half the chord angle between gamma_{2k+1}(t) and gamma_{2k+1}(s), for d_1(t, s) <= delta_k.
double segment_midpoint_radius(int k, double t, double s);

}  // namespace epcgh
