#include <doctest.h>

#include <cmath>

#include "epcgh/curves.hpp"
#include "epcgh/sphere.hpp"

using namespace epcgh;

namespace {
double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}
SpherePoint e(int n, int i) {
  std::vector<double> v(n, 0.0);
  v[i] = 1.0;
  return SpherePoint(v);
}
}  // namespace

TEST_CASE("sphere points are validated") {
  CHECK_THROWS_AS(SpherePoint({1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(SpherePoint({1.0}), DimensionError);
  CHECK_THROWS_AS(SpherePoint::normalized({0.0, 0.0, 0.0}), DomainError);
  const SpherePoint p = SpherePoint::normalized({3.0, 4.0});
  CHECK(p[0] == doctest::Approx(0.6));
  CHECK(p.dim() == 1);
}

TEST_CASE("geodesic distance examples") {
  CHECK(geodesic_distance(e(4, 0), e(4, 0)) == 0.0);
  CHECK(geodesic_distance(e(4, 0), e(4, 0).antipode()) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(std::abs(geodesic_distance(gamma_odd(1, 0.0), gamma_odd(1, kPi / 4.0)) - kPi / 2.0) < 1e-12);
  CHECK_THROWS_AS(geodesic_distance(e(3, 0), e(4, 0)), DimensionError);
  // drift beyond |dot| = 1 is clamped
  const SpherePoint a = SpherePoint::normalized({1.0, 1e-9, 0.0});
  CHECK_FALSE(std::isnan(geodesic_distance(a, a)));
}

TEST_CASE("circle distance examples") {
  CHECK(circle_distance(0.0, 0.0) == 0.0);
  CHECK(circle_distance(0.0, kPi) == doctest::Approx(kPi));
  CHECK(circle_distance(-3.0 * kPi / 4.0, 3.0 * kPi / 4.0) == doctest::Approx(kPi / 2.0));
  CHECK(circle_distance(0.1, 0.1 + 10.0 * kTwoPi) < 1e-12);
  CHECK(CircleAngle(kPi).value() == doctest::Approx(kPi));
  CHECK(CircleAngle(-kPi).value() == doctest::Approx(kPi));
}

TEST_CASE("rotation examples") {
  Rng rng(5);
  for (int k = 1; k <= 4; ++k) {
    const auto pts = sample_sphere(2 * k + 1, 20, rng);
    for (const auto& p : pts) {
      CHECK(max_abs_diff(apply_rotation({k, 0.0}, p).coords(), p.coords()) < 1e-15);
      CHECK(max_abs_diff(apply_rotation({k, kPi}, p).coords(), p.antipode().coords()) < 1e-12);
    }
  }
  CHECK(max_abs_diff(apply_rotation({1, 0.3}, gamma_odd(1, 0.7)).coords(), gamma_odd(1, 1.0).coords()) < 1e-12);
  CHECK_THROWS_AS(apply_rotation({2, 0.3}, gamma_odd(1, 0.7)), DimensionError);
}

TEST_CASE("rotation is a norm preserving homomorphism and an isometry") {
  Rng rng(mix_seed(42, 1));
  std::uniform_real_distribution<double> ut(-kPi, kPi);
  double hom = 0.0, iso = 0.0, nrm = 0.0;
  for (int k = 1; k <= 6; ++k) {
    for (int i = 0; i < 200; ++i) {
      const auto pq = sample_sphere(2 * k + 1, 2, rng);
      const double s = ut(rng), t = ut(rng);
      const SpherePoint a = apply_rotation({k, s}, apply_rotation({k, t}, pq[0]));
      const SpherePoint b = apply_rotation({k, s + t}, pq[0]);
      hom = std::max(hom, max_abs_diff(a.coords(), b.coords()));
      const SpherePoint tp = apply_rotation({k, t}, pq[0]), tq = apply_rotation({k, t}, pq[1]);
      iso = std::max(iso, std::abs(geodesic_distance(pq[0], pq[1]) - geodesic_distance(tp, tq)));
      nrm = std::max(nrm, std::abs(norm(tp.coords()) - 1.0));
    }
  }
  CHECK(hom < 1e-12);
  CHECK(iso < 1e-12);
  CHECK(nrm < 1e-12);
}

TEST_CASE("hopf coordinates examples") {
  CHECK(max_abs_diff(hopf_to_ambient(HopfPoint::make({0, 0}, {1, 0})).coords(), std::vector<double>{1, 0, 0, 0}) == 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(max_abs_diff(hopf_to_ambient(HopfPoint::make({0, 0}, {r, r})).coords(), gamma_odd(1, 0.0).coords()) < 1e-15);
  CHECK(max_abs_diff(hopf_to_ambient(HopfPoint::make({kPi / 2, kPi}, {0.6, 0.8})).coords(),
                     std::vector<double>{0, 0.6, -0.8, 0}) < 1e-15);
  const HopfPoint h = ambient_to_hopf(e(4, 0), 1);
  CHECK(h.thetas[0].value() == 0.0);
  CHECK(h.thetas[1].value() == 0.0);
  CHECK(h.amps[1] == 0.0);
  const HopfPoint g = ambient_to_hopf(gamma_odd(1, 0.0), 1);
  CHECK(g.amps[0] == doctest::Approx(r));
  CHECK(g.amps[1] == doctest::Approx(r));
  CHECK_THROWS_AS(HopfPoint::make({0, 0}, {1, 1}), DomainError);
  CHECK_THROWS_AS(ambient_to_hopf(e(5, 0), 1), DimensionError);
}

TEST_CASE("hopf round trip") {
  for (int k = 1; k <= 4; ++k) {
    const auto pts = sample_sphere(2 * k + 1, 1000, 100 + k);
    double err = 0.0;
    for (const auto& p : pts) err = std::max(err, max_abs_diff(hopf_to_ambient(ambient_to_hopf(p, k)).coords(), p.coords()));
    CHECK(err < 1e-12);
  }
}

TEST_CASE("sampling") {
  const auto a = sample_sphere(3, 2, 7), b = sample_sphere(3, 2, 7);
  CHECK(max_abs_diff(a[0].coords(), b[0].coords()) == 0.0);
  CHECK(max_abs_diff(a[1].coords(), b[1].coords()) == 0.0);
  CHECK(sample_sphere(3, 0, 7).empty());
  const auto big = sample_sphere(3, 100000, 11);
  std::vector<double> mean(4, 0.0);
  double nerr = 0.0;
  for (const auto& p : big) {
    for (int i = 0; i < 4; ++i) mean[i] += p[i] / big.size();
    nerr = std::max(nerr, std::abs(norm(p.coords()) - 1.0));
  }
  for (double m : mean) CHECK(std::abs(m) < 5e-2);
  CHECK(nerr < 1e-12);
}

TEST_CASE("metric axioms and antipodes on sampled triples") {
  const auto pts = sample_sphere(5, 3000, 17);
  for (std::size_t i = 0; i + 2 < pts.size(); i += 3) {
    const auto &p = pts[i], &q = pts[i + 1], &r = pts[i + 2];
    CHECK(geodesic_distance(p, q) == geodesic_distance(q, p));
    CHECK(geodesic_distance(p, r) <= geodesic_distance(p, q) + geodesic_distance(q, r) + 1e-12);
    CHECK(std::abs(geodesic_distance(p, q) + geodesic_distance(p, q.antipode()) - kPi) < 1e-12);
  }
}

TEST_CASE("exp map stays on the sphere") {
  Rng rng(3);
  std::vector<double> p(4), v(4);
  for (int i = 0; i < 100; ++i) {
    sample_sphere_into(rng, p);
    sample_sphere_into(rng, v);
    const auto q = exp_map(p, v);
    CHECK(std::abs(norm(q) - 1.0) < 1e-12);
  }
}
