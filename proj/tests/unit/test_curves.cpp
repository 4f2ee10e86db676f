#include <doctest.h>

#include <cmath>

#include "epcgh/curves.hpp"

using namespace epcgh;

namespace {
double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}
std::vector<double> direct_gamma(int k, double t) {
  std::vector<double> v;
  for (int l = 0; l <= k; ++l) {
    v.push_back(std::cos((2 * l + 1) * t) / std::sqrt(k + 1.0));
    v.push_back(std::sin((2 * l + 1) * t) / std::sqrt(k + 1.0));
  }
  return v;
}
}  // namespace

TEST_CASE("constants") {
  CHECK(delta_k(1) == doctest::Approx(2.0 * kPi / 3.0));
  CHECK(delta_k(2) == doctest::Approx(4.0 * kPi / 5.0));
  CHECK(zeta_m(2) == doctest::Approx(std::acos(-1.0 / 3.0)));
  for (int k = 1; k < 10; ++k) CHECK(delta_k(k) < delta_k(k + 1));
}

TEST_CASE("gamma_odd examples") {
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(max_abs_diff(gamma_odd(1, 0.0).coords(), std::vector<double>{r, 0, r, 0}) < 1e-15);
  CHECK(max_abs_diff(gamma_odd(1, kPi).coords(), gamma_odd(1, 0.0).antipode().coords()) < 1e-12);
  CHECK(max_abs_diff(gamma_odd(2, 0.4).coords(), direct_gamma(2, 0.4)) < 1e-14);
  CHECK(max_abs_diff(TmcOdd{3}(1.7).coords(), direct_gamma(3, 1.7)) < 1e-14);
}

TEST_CASE("gamma_odd derivative") {
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(max_abs_diff(gamma_odd_derivative(1, 0.0), std::vector<double>{0, r, 0, 3 * r}) < 1e-15);
  for (double t = -3.0; t < 3.0; t += 0.37) CHECK(std::abs(dot(gamma_odd(3, t).coords(), gamma_odd_derivative(3, t))) < 1e-12);
  const double h = 1e-6;
  const auto a = gamma_odd(2, 1.1 + h).vec(), b = gamma_odd(2, 1.1 - h).vec();
  const auto d = gamma_odd_derivative(2, 1.1);
  for (int i = 0; i < 6; ++i) CHECK(std::abs((a[i] - b[i]) / (2 * h) - d[i]) < 1e-6);
}

TEST_CASE("gamma_even examples and projection consistency") {
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(max_abs_diff(gamma_even(1, 0.0).coords(), std::vector<double>{r, 0, r}) < 1e-15);
  CHECK(max_abs_diff(gamma_even(1, kPi / 6).coords(), std::vector<double>{std::sqrt(3.0) / 2, 0.5, 0}) < 1e-15);
  for (int k = 1; k <= 4; ++k) {
    for (int i = 0; i < 100; ++i) {
      const double t = -kPi + kTwoPi * i / 100.0;
      std::vector<double> g = gamma_odd(k, t).vec();
      g.pop_back();
      const double n = norm(g);
      for (double& x : g) x /= n;
      CHECK(max_abs_diff(g, gamma_even(k, t).coords()) < 1e-12);
    }
  }
}

TEST_CASE("h examples") {
  CHECK(h_closed(1, 0.0) == 1.0);
  CHECK(h_closed(1, kPi) == -1.0);
  CHECK(std::abs(h_closed(1, kPi / 4)) < 1e-15);
  CHECK(std::abs(h_closed(3, 0.9) - h_sum(3, 0.9)) < 1e-13);
  CHECK(h_sum(1, 0.0) == doctest::Approx(1.0));
  CHECK(std::abs(h_sum(1, 2 * kPi / 3) - 0.25) < 1e-15);
  for (int i = 0; i <= 500; ++i) {
    const double t = delta_k(2) * i / 500.0;
    CHECK(h_sum(2, t) >= std::cos(delta_k(2)) - 1e-15);
  }
}

TEST_CASE("three-way h agreement including the singular points") {
  double worst = 0.0;
  for (int k = 0; k <= 8; ++k) {
    std::vector<double> ts;
    for (int i = 0; i <= 2000; ++i) ts.push_back(-kPi + kTwoPi * i / 2000.0);
    for (double e : {0.0, 1e-12, 1e-10, 3e-9, 1e-8, 2e-8, 1e-6})
      for (double c : {0.0, kPi, -kPi}) {
        ts.push_back(c + e);
        ts.push_back(c - e);
      }
    for (double t : ts) {
      const double a = h_closed(k, t), b = h_sum(k, t);
      worst = std::max(worst, std::abs(a - b));
      if (k >= 1) worst = std::max(worst, std::abs(b - dot(gamma_odd(k, 0.0).coords(), gamma_odd(k, t).coords())));
      if (k >= 1) worst = std::max(worst, std::abs(b - support_P(k, gamma_odd(k, 0.0), t)));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("h symmetry and cosine envelope") {
  for (int k = 1; k <= 6; ++k)
    for (double t = -3.1; t < 3.1; t += 0.013) {
      CHECK(h_closed(k, t) == doctest::Approx(h_closed(k, -t)).epsilon(1e-13));
      double lo = 2, hi = -2;
      for (int l = 0; l <= k; ++l) {
        lo = std::min(lo, std::cos((2 * l + 1) * t));
        hi = std::max(hi, std::cos((2 * l + 1) * t));
      }
      CHECK(h_closed(k, t) >= lo - 1e-13);
      CHECK(h_closed(k, t) <= hi + 1e-13);
    }
}

TEST_CASE("support function") {
  CHECK(std::abs(support_P(1, SpherePoint({0, 0, 1, 0}), 0.0) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK_THROWS_AS(support_P(2, SpherePoint({0, 0, 1, 0}), 0.0), DimensionError);
  Rng rng(9);
  std::uniform_real_distribution<double> ut(-kPi, kPi);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int k = 1 + i % 4;
    const SpherePoint q = sample_sphere(2 * k + 1, 1, rng)[0];
    const double t = ut(rng);
    worst = std::max(worst, std::abs(support_P(k, q, t) - dot(q.coords(), gamma_odd(k, t).coords())));
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("alpha curve") {
  CHECK(max_abs_diff(alpha_curve(kPi / 6).coords(), std::vector<double>{std::cos(kPi / 6), 0.5, 0}) < 1e-15);
  CHECK(max_abs_diff(alpha_curve(0.0).coords(), std::vector<double>{std::sqrt(1 - 0.0225), 0, 0.15}) < 1e-15);
  for (int i = 0; i < 100; ++i) {
    const double t = -kPi + kTwoPi * i / 100.0;
    CHECK(max_abs_diff(alpha_curve(t + kPi).coords(), alpha_curve(t).antipode().coords()) < 1e-12);
  }
}

TEST_CASE("sigma surface") {
  CHECK(max_abs_diff(sigma_surface(0, 0).coords(), std::vector<double>{0, 0, 1, 0}) < 1e-15);
  const double r = std::cos(kPi / 4);
  CHECK(max_abs_diff(sigma_surface(kPi / 4, kPi / 2).coords(), std::vector<double>{r, r, 0, 0}) < 1e-15);
  CHECK_THROWS_AS(sigma_surface(0, -0.1), DomainError);
  CHECK_THROWS_AS(sigma_surface(0, 3.2), DomainError);
  double wmax = 0.0;
  for (int i = 0; i < 360; ++i)
    for (int j = 0; j <= 180; ++j) {
      const double phi = kTwoPi * i / 360, th = kPi * j / 180;
      const SpherePoint p = sigma_surface(phi, th);
      CHECK(std::abs(p[3] - std::sin(th) * std::sin(2 * th) * std::cos(2 * phi) / 3) < 1e-15);
      wmax = std::max(wmax, std::abs(p[3]));
    }
  CHECK(wmax < 1.0 / 3.0);
}

TEST_CASE("images are unit vectors and odd curves are antipodal") {
  double nerr = 0.0, anti = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double t = -kPi + kTwoPi * (i + 0.5) / 10000.0;
    for (int k = 1; k <= 6; ++k) {
      nerr = std::max(nerr, std::abs(norm(gamma_odd(k, t).coords()) - 1));
      nerr = std::max(nerr, std::abs(norm(gamma_even(k, t).coords()) - 1));
      anti = std::max(anti, max_abs_diff(gamma_odd(k, t + kPi).coords(), gamma_odd(k, t).antipode().coords()));
    }
    nerr = std::max(nerr, std::abs(norm(alpha_curve(t).coords()) - 1));
    nerr = std::max(nerr, std::abs(norm(sigma_surface(t + kPi, 0.5 * (t + kPi)).coords()) - 1));
  }
  CHECK(nerr < 1e-12);
  CHECK(anti < 1e-12);
}

TEST_CASE("rotation equivariance of the odd curve") {
  double worst = 0.0;
  for (int k = 1; k <= 6; ++k)
    for (double t = -3.0; t < 3.1; t += 0.29)
      for (double s = -3.0; s < 3.1; s += 0.31)
        worst = std::max(worst, max_abs_diff(gamma_odd(k, t + s).coords(), apply_rotation({k, t}, gamma_odd(k, s)).coords()));
  CHECK(worst < 1e-12);
}
