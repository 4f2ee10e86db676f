#include <doctest.h>

#include <cmath>

#include "epcgh/curves.hpp"
#include "epcgh/epc.hpp"
#include "epcgh/fiber3.hpp"

using namespace epcgh;

namespace {
constexpr double kThird = kPi / 3.0;
double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}
}  // namespace

TEST_CASE("boundary examples") {
  const double z0 = std::atan(1.0 / 9.0);
  CHECK(std::abs(zeta0() - z0) < 1e-15);
  CHECK(std::abs(zeta0() - 0.110657) < 1e-6);
  const FiberBoundaryPoint p = fiber3_boundary(0.0);
  CHECK(max_abs_diff(p.ambient.coords(), std::vector<double>{std::cos(z0), 0, -std::sin(z0), 0}) < 1e-15);
  CHECK(max_abs_diff(qbar(kThird), std::vector<double>{0, 0, 1, 0}) < 1e-12);
  CHECK(max_abs_diff(fiber3_boundary(kThird - 1e-9).ambient.coords(), std::vector<double>{0, 0, 1, 0}) < 1e-8);
  CHECK(fiber3_has_double_max(fiber3_boundary(0.5)));
  CHECK_THROWS_AS(fiber3_boundary(kThird), DomainError);
  CHECK_THROWS_AS(fiber3_boundary(-1.1), DomainError);
  CHECK_THROWS_AS(qbar(1.1), DomainError);
}

TEST_CASE("boundary invariants") {
  const std::vector<double> gd = gamma_odd_derivative(1, 0.0);
  for (int i = 0; i < 2000; ++i) {
    const double th = -kThird + 2 * kThird * i / 2000.0;
    const FiberBoundaryPoint p = fiber3_boundary(th);
    const double x = 3.0 * (3.0 - 4.0 * std::sin(th) * std::sin(th));
    CHECK(std::abs(p.zeta - std::atan2(1.0, x)) < 1e-12);
    CHECK(p.zeta > 0.0);
    CHECK(p.zeta <= kPi / 2);
    CHECK(std::abs(dot(p.ambient.coords(), gd)) < 1e-12);
    CHECK(std::abs(norm(p.ambient.coords()) - 1.0) < 1e-12);
    // the two closest curve points are gamma(0) and gamma(2 theta)
    CHECK(std::abs(support_P(1, p.ambient, 0.0) - support_P(1, p.ambient, 2 * th)) < 1e-10);
  }
}

TEST_CASE("boundary points are in the Voronoi cell of 0") {
  for (int i = 0; i < 200; ++i) {
    const double th = -kThird + 2 * kThird * (i + 0.5) / 200.0;
    const SpherePoint q = fiber3_boundary(th).ambient;
    const double p0 = support_P(1, q, 0.0);
    double worst = -1.0;
    for (int j = 0; j < 10000; ++j) worst = std::max(worst, support_P(1, q, -kPi + kTwoPi * j / 10000.0) - p0);
    CHECK(worst <= 1e-9);
    CHECK(fiber3_has_double_max(fiber3_boundary(th)));
  }
}

TEST_CASE("zeta derivative") {
  for (double th = -1.0; th <= 1.0; th += 0.05) {
    const double h = 1e-6;
    CHECK(std::abs((fiber3_zeta(th + h) - fiber3_zeta(th - h)) / (2 * h) - fiber3_zeta_prime(th)) < 1e-6);
  }
}

TEST_CASE("maxima classification examples") {
  CHECK(classify_maxima(0.3, 0.7).count == 1);
  const MaximaClass two = classify_maxima(kPi / 4, kPi);
  CHECK(two.count == 2);
  const MaximaClass three = classify_maxima(kPi / 2, 0.2);
  CHECK(three.count == 3);
  const auto [a, b] = double_max_locations(kPi / 4);
  CHECK(std::abs(b - 0.95532) < 1e-5);
  CHECK(std::abs(a + b) < 1e-15);
  REQUIRE(two.locations.size() == 2);
  CHECK(std::abs(two.locations[0] - a) < 1e-8);
  CHECK(std::abs(two.locations[1] - b) < 1e-8);
  CHECK_THROWS_AS(classify_maxima(-0.1, 0.0), DomainError);
  CHECK_THROWS_AS(double_max_locations(0.1), DomainError);
}

TEST_CASE("double maximum limits") {
  CHECK(double_max_locations(zeta0() + 1e-12).second < 1e-4);
  CHECK(std::abs(double_max_locations(kPi / 2 - 1e-12).second - kThird) < 1e-6);
}

TEST_CASE("classification matches the closed form across zeta") {
  for (int i = 0; i < 100; ++i) {
    const double z = zeta0() + (kPi / 2 - zeta0()) * (i + 1) / 101.0;
    const MaximaClass c = classify_maxima(z, kPi);
    const auto [a, b] = double_max_locations(z);
    REQUIRE(c.count == 2);
    CHECK(std::abs(c.locations[0] - a) < 1e-8);
    CHECK(std::abs(c.locations[1] - b) < 1e-8);
  }
}

TEST_CASE("single maximum away from theta = pi") {
  Rng rng(4);
  std::uniform_real_distribution<double> uz(0.0, kPi / 2 - 1e-3), ut(-kPi + 0.05, kPi - 0.05);
  for (int i = 0; i < 200; ++i) {
    const MaximaClass c = classify_maxima(uz(rng), ut(rng));
    CHECK(c.count == 1);
    CHECK(c.count == static_cast<int>(c.locations.size()));
    for (double t : c.locations) CHECK(std::abs(t) <= kThird + 1e-9);
  }
}

TEST_CASE("rho3 profile") {
  const Rho3Extrema e = rho3_extrema();
  CHECK(std::abs(e.max_value - 0.9232) < 1e-3);
  CHECK(std::abs(e.min_value - 0.6476) < 1e-3);
  for (double th = 0.0; th <= kThird; th += 0.01) CHECK(std::abs(rho3(th) - rho3(-th)) < 1e-12);
  CHECK(e.max_value <= kThird);
}

TEST_CASE("disc3 witness") {
  CHECK(disc3_witness(0.0).residual == 0.0);
  CHECK(disc3_witness(0.8).residual < 1e-12);
  CHECK(disc3_witness(2 * kThird).residual < 1e-12);
  for (int i = 0; i < 1000; ++i) CHECK(disc3_witness(2 * kThird * i / 999.0).residual < 1e-12);
  CHECK_THROWS_AS(disc3_witness(2.2), DomainError);
  CHECK_THROWS_AS(disc3_witness(-0.1), DomainError);
}

TEST_CASE("rotated fibers stop meeting past 2pi/3") {
  CHECK(rotated_boundary_gap(2 * kThird) < 1e-6);
  CHECK(rotated_boundary_gap(1.0) < 1e-6);
  for (int i = 0; i <= 40; ++i) {
    const double t = 2 * kThird + 1e-3 + (kPi - 2 * kThird - 1e-3) * (i + 0.01) / 40.0;
    CHECK(rotated_boundary_gap(t) > 1e-4);
  }
}

TEST_CASE("fiber samples lie in the spherical hull of the boundary") {
  // gnomonic chart at gamma(0): spherical hulls become Euclidean hulls, compared through support functions
  const std::vector<double> c = gamma_odd(1, 0.0).vec();
  auto chart = [&](std::span<const double> x) {
    const double s = dot(x, c);
    REQUIRE(s > 0.0);
    std::vector<double> y(4);
    for (int i = 0; i < 4; ++i) y[i] = x[i] / s;
    return y;
  };
  std::vector<std::vector<double>> bd;
  for (int i = 0; i < 4000; ++i) bd.push_back(chart(qbar(-kThird + 2 * kThird * i / 3999.0)));
  std::vector<std::vector<double>> qs;
  for (const auto& q : fiber0_samples(1, 2000, 8)) qs.push_back(chart(q.coords()));
  Rng rng(12);
  for (int d = 0; d < 300; ++d) {
    std::vector<double> v(4);
    sample_sphere_into(rng, v);
    double hb = -1e300, hq = -1e300;
    for (const auto& b : bd) hb = std::max(hb, dot(b, v));
    for (const auto& q : qs) hq = std::max(hq, dot(q, v));
    CHECK(hq <= hb + 1e-3);
  }
}
