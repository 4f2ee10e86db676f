#include <doctest.h>

#include <cmath>

#include "epcgh/curves.hpp"
#include "epcgh/duality.hpp"
#include "epcgh/fiber3.hpp"

using namespace epcgh;

TEST_CASE("face candidates validate their vertices") {
  CHECK_THROWS_AS(FaceCandidate::make(1, {}), DomainError);
  CHECK_THROWS_AS(FaceCandidate::make(0, {0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(FaceCandidate::make(1, {0.5, 0.5}), DomainError);
  CHECK_THROWS_AS(FaceCandidate::make(1, {0.5, 0.5 + kTwoPi}), DomainError);
  CHECK(FaceCandidate::make(1, {0.0, 1.0}).params.size() == 2);
}

TEST_CASE("edge predicate for B_4") {
  CHECK(edge_predicate(2, 0.0, 1.0));
  CHECK(edge_predicate(2, 0.0, 2.0 * kPi / 3.0));
  CHECK_FALSE(edge_predicate(2, 0.0, 2.1));
  CHECK_FALSE(edge_predicate(2, 0.0, kPi));
  CHECK_THROWS_AS(edge_predicate(1, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(edge_predicate(2, 1.0, 1.0), DomainError);
}

TEST_CASE("edge predicate threshold grows with k") {
  // delta_{k-1} increases, so every edge of B_{2k} stays an edge of B_{2k+2}
  for (int k = 2; k <= 6; ++k)
    for (double d = 0.05; d < kPi; d += 0.05)
      if (edge_predicate(k, 0.0, d)) CHECK(edge_predicate(k + 1, 0.0, d));
}

TEST_CASE("segment witness for a short chord") {
  const DualityWitness w = duality_witness(FaceCandidate::make(1, {0.3, 1.3}));
  CHECK(w.found);
  CHECK(w.equidistance_error < 1e-9);
  CHECK(std::abs(w.min_curve_distance - w.radius) < 1e-7);
}

TEST_CASE("threshold pair meets at qbar(pi/3)") {
  const DualityWitness w = duality_witness(FaceCandidate::make(1, {0.0, 2.0 * kPi / 3.0}), 10000);
  REQUIRE(w.found);
  const std::vector<double> q = qbar(kPi / 3.0);
  double err = 0.0;
  for (int i = 0; i < 4; ++i) err = std::max(err, std::abs(q[i] - w.center[i]));
  CHECK(err < 1e-7);
  CHECK_FALSE(duality_witness(FaceCandidate::make(1, {0.0, 2.0 * kPi / 3.0 + 0.05})).found);
}

TEST_CASE("no witness across the threshold") {
  const DualityWitness w = duality_witness(FaceCandidate::make(1, {0.0, 2.5}));
  CHECK_FALSE(w.found);
}

TEST_CASE("triangle center is equidistant") {
  for (double t : {0.0, 0.4, -1.2, 2.9}) {
    const double d = triangle_center_distance(1, t);
    const DualityWitness w =
        duality_witness(FaceCandidate::make(1, {t - 2.0 * kPi / 3.0, t, t + 2.0 * kPi / 3.0}));
    CHECK(w.found);
    CHECK(w.radius == doctest::Approx(d).epsilon(1e-9));
    CHECK(std::abs(d - kPi / 4.0) < 1e-12);
  }
  CHECK_THROWS_AS(triangle_center_distance(2, 0.0), DomainError);
}

TEST_CASE("segment radius bound") {
  for (int k = 1; k <= 5; ++k)
    for (double s = 0.01; s <= delta_k(k); s += 0.01) CHECK(segment_midpoint_radius(k, 0.2, 0.2 + s) <= 0.5 * delta_k(k) + 1e-12);
  CHECK(std::abs(segment_midpoint_radius(1, 0.0, 2.0 * kPi / 3.0) - 0.5 * std::acos(0.25)) < 1e-12);
  CHECK(segment_midpoint_radius(1, 0.7, 0.7) == 0.0);
  CHECK(segment_midpoint_radius(2, 0.0, delta_k(2)) <= 0.5 * delta_k(2) + 1e-12);
  CHECK_THROWS_AS(segment_midpoint_radius(1, 0.0, 2.2), DomainError);
}

TEST_CASE("duality agreement on pairs straddling the threshold") {
  Rng rng(mix_seed(42, 7));
  std::uniform_real_distribution<double> ut(-kPi, kPi), ue(-0.3, 0.3);
  // pairs stay at least 0.01 away from the threshold
  int agree = 0;
  for (int i = 0; i < 200; ++i) {
    const double t1 = ut(rng);
    double e = ue(rng);
    if (std::abs(e) < 1e-2) e = std::copysign(1e-2, e);
    const double t2 = t1 + delta_k(1) + e;
    const bool edge = edge_predicate(2, t1, t2);
    const bool found = duality_witness(FaceCandidate::make(1, {t1, t2})).found;
    if (found) {
      const DualityWitness w = duality_witness(FaceCandidate::make(1, {t1, t2}));
      CHECK(w.equidistance_error <= 1e-7);
      CHECK(std::abs(w.min_curve_distance - w.radius) <= 1e-7);
    }
    if (edge == found) ++agree;
    else MESSAGE("disagreement at t1=", t1, " e=", e);
  }
  CHECK(agree == 200);
}
