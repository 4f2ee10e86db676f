#include "epcgh/duality.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "detail.hpp"
#include "epcgh/curves.hpp"

namespace epcgh {

FaceCandidate FaceCandidate::make(int k, std::vector<double> params) {
  if (k < 1) throw DomainError("face candidates need curve index k >= 1");
  if (params.empty()) throw DomainError("face candidates need at least one vertex");
  for (std::size_t i = 0; i < params.size(); ++i)
    for (std::size_t j = i + 1; j < params.size(); ++j)
      if (circle_distance(params[i], params[j]) < 1e-9) throw DomainError("face vertices must be distinct");
  FaceCandidate f;
  f.k = k;
  f.params = std::move(params);
  return f;
}

bool edge_predicate(int k, double t1, double t2) {
  if (k < 2) throw DomainError("edge criterion needs polytope index k >= 2");
  const double d = circle_distance(t1, t2);
  if (d < 1e-9) throw DomainError("an edge needs two distinct vertices");
  return d <= delta_k(k - 1) + 1e-12;
}

namespace {

struct GridCheck {
  double max_dot;
  double min_dist;
};

GridCheck scan_curve(int k, const std::vector<double>& q, int grid, const std::vector<double>& extra = {}) {
  std::vector<double> g(2 * k + 2);
  auto f = [&](double t) {
    gamma_odd_into(k, t, g);
    return dot(q, g);
  };
  const double h = kTwoPi / grid;
  std::vector<double> v(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) v[i] = f(-kPi + h * (i + 1));
  double m = *std::max_element(v.begin(), v.end());
  for (double t : extra) m = std::max(m, f(t));
  // polish grid peaks that could beat the current best
  const double m0 = m;
  for (int i = 0; i < grid; ++i) {
    const double a = v[(i + grid - 1) % grid], b = v[(i + 1) % grid];
    if (v[i] < a || v[i] < b || v[i] < m0 - 1e-4) continue;
    const double t0 = -kPi + h * (i + 1);
    m = std::max(m, detail::golden_max(f, t0 - h, t0 + h, 1e-12).second);
  }
  return {m, std::acos(detail::clamp_unit(m))};
}

}  // namespace

DualityWitness duality_witness(const FaceCandidate& face, int grid) {
  const int k = face.k;
  const int n = 2 * k + 2;
  const std::size_t l = face.params.size();
  if (l == 0) throw DomainError("face candidates need at least one vertex");
  if (l > static_cast<std::size_t>(n)) throw DomainError("too many vertices for the ambient dimension");
  if (grid < 16) throw DomainError("curve grid too small");

  // Equal support value at every vertex, and each vertex a critical point of q . gamma.
  std::vector<std::vector<double>> verts, tangents;
  for (double t : face.params) {
    verts.push_back(gamma_odd(k, t).vec());
    tangents.push_back(gamma_odd_derivative(k, t));
  }
  Eigen::MatrixXd M(static_cast<Eigen::Index>(2 * l - 1), n);
  int row = 0;
  for (std::size_t i = 1; i < l; ++i, ++row)
    for (int c = 0; c < n; ++c) M(row, c) = verts[i][c] - verts[0][c];
  for (std::size_t i = 0; i < l; ++i, ++row)
    for (int c = 0; c < n; ++c) M(row, c) = tangents[i][c];

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 1.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-9 * std::max(1.0, smax)) ++rank;
  const int nullity = n - rank;
  DualityWitness out;
  if (nullity == 0) return out;
  const Eigen::MatrixXd N = svd.matrixV().rightCols(nullity);

  auto center_of = [&](const double* c) {
    Eigen::VectorXd v = N * Eigen::Map<const Eigen::VectorXd>(c, nullity);
    const double nv = v.norm();
    std::vector<double> q(n);
    for (int i = 0; i < n; ++i) q[i] = nv > 0 ? v(i) / nv : 0.0;
    if (dot(q, verts[0]) < 0)
      for (double& x : q) x = -x;
    return q;
  };
  // Excess of the best curve point over the face vertices; zero when the vertices are closest.
  const int coarse = std::min(grid, 2048);
  auto excess = [&](const double* c) {
    const std::vector<double> q = center_of(c);
    return scan_curve(k, q, coarse).max_dot - dot(q, verts[0]);
  };

  std::vector<double> coef(nullity, 0.0);
  coef[0] = 1.0;
  if (nullity > 1) {
    // Multi-start descent over the unit sphere of the null space.
    Rng rng(mix_seed(0xD0A1, static_cast<std::uint64_t>(l)));
    double best = 1e300;
    std::vector<double> best_c = coef;
    for (int s = 0; s < 8 * nullity; ++s) {
      std::vector<double> c(nullity);
      sample_sphere_into(rng, c);
      const double v = detail::nelder_mead(excess, c, 0.3, 1e-12, 4000);
      if (v < best) {
        best = v;
        best_c = c;
      }
    }
    coef = best_c;
  }
  const std::vector<double> q = center_of(coef.data());
  double dmin = 1e300, dmax = -1e300;
  for (const auto& v : verts) {
    const double d = geodesic_distance_raw(q, v);
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
  }
  const GridCheck gc = scan_curve(k, q, grid, face.params);
  out.center = q;
  out.radius = dmin;
  out.equidistance_error = dmax - dmin;
  out.min_curve_distance = gc.min_dist;
  out.found = out.equidistance_error <= 1e-7 && gc.min_dist >= dmax - 1e-7;
  return out;
}

double triangle_center_distance(int k, double t) {
  if (k != 1) throw DomainError("the triangle construction is specific to gamma_3");
  const std::vector<double> c{0.0, 0.0, std::cos(3.0 * t), std::sin(3.0 * t)};
  double d[3];
  for (int i = 0; i < 3; ++i) d[i] = geodesic_distance_raw(c, gamma_odd(1, t + (i - 1) * kTwoPi / 3.0).coords());
  if (std::abs(d[0] - d[1]) > 1e-12 || std::abs(d[1] - d[2]) > 1e-12)
    throw std::logic_error("triangle vertices are not equidistant from the center");
  return d[1];
}

double segment_midpoint_radius(int k, double t, double s) {
  if (k < 1) throw DomainError("k must be at least 1");
  const double dk = delta_k(k);
  if (circle_distance(t, s) > dk + 1e-12) throw DomainError("segment endpoints must be within delta_k");
  const double mu = 0.5 * std::acos(detail::clamp_unit(h_closed(k, s - t)));
  if (mu > 0.5 * dk + 1e-12) throw std::logic_error("segment radius exceeds delta_k / 2");
  return mu;
}

}  // namespace epcgh
