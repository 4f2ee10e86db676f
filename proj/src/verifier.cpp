#include "epcgh/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>
#include <cmath>
#include <json.hpp>

#include "detail.hpp"
#include "epcgh/fiber3.hpp"
#include "interval.hpp"

namespace epcgh {

namespace {

constexpr double kThird = kPi / 3.0;
constexpr double kTwoThirds = 2.0 * kPi / 3.0;

double shift(BstarCondition c) { return c == BstarCondition::Upper ? -kTwoThirds : kTwoThirds; }

void check_theta(double th) {
  if (!(th >= -kThird - 1e-12 && th <= kThird + 1e-12))
    throw DomainError("fiber boundary angles must lie in [-pi/3, pi/3]");
}

struct AB {
  double a, b, a_th, b_th;
};

AB ab(double theta) {
  const double x = 3.0 + 6.0 * std::cos(2.0 * theta);
  const double r = 1.0 / std::sqrt(1.0 + x * x);
  const double r3 = r * r * r;
  const double s2 = std::sin(2.0 * theta);
  return {x * r, r, -12.0 * s2 * r3, 12.0 * x * s2 * r3};
}

}  // namespace

double objective_Ft(double theta, double theta_p, double t) {
  check_theta(theta);
  check_theta(theta_p);
  const AB p = ab(theta), q = ab(theta_p);
  const double u = theta - theta_p + t;
  return std::cos(u) * p.a * q.a + std::cos(3.0 * u) * p.b * q.b;
}

double bstar_objective(BstarCondition c, double theta, double theta_p, double t) {
  return objective_Ft(theta, theta_p, t) - std::cos(t + shift(c));
}

std::array<double, 3> bstar_gradient(BstarCondition c, double theta, double theta_p, double t) {
  const AB p = ab(theta), q = ab(theta_p);
  const double u = theta - theta_p + t;
  const double su = std::sin(u), cu = std::cos(u), s3 = std::sin(3.0 * u), c3 = std::cos(3.0 * u);
  const double common = -su * p.a * q.a - 3.0 * s3 * p.b * q.b;
  return {common + cu * p.a_th * q.a + c3 * p.b_th * q.b, -common + cu * p.a * q.a_th + c3 * p.b * q.b_th,
          common + std::sin(t + shift(c))};
}

namespace {

using detail::Interval;

struct IAB {
  Interval a, b, a_th, b_th;
};

IAB interval_ab(Interval th) {
  const Interval x = Interval(3.0) + Interval(6.0) * detail::cos(Interval(2.0) * th);
  const Interval xc{std::max(0.0, x.lo), std::max(0.0, x.hi)};
  // a = x / sqrt(1+x^2) increases with x, b = 1 / sqrt(1+x^2) decreases
  auto fa = [](double v) { return v / std::sqrt(1.0 + v * v); };
  const Interval a = detail::pad(fa(xc.lo), fa(xc.hi));
  const Interval b = detail::one_plus_sq_pow(xc, -0.5);
  const Interval r3 = detail::one_plus_sq_pow(xc, -1.5);
  const Interval s2 = detail::sin(Interval(2.0) * th);
  return {a, b, Interval(-12.0) * s2 * r3, Interval(12.0) * xc * s2 * r3};
}

// Per-dimension Lipschitz bounds on the box: interval enclosures capped by the global constants.
std::array<double, 3> box_lipschitz(BstarCondition c, const Box& b) {
  const Interval th{b.lo[0], b.hi[0]}, tp{b.lo[1], b.hi[1]}, t{b.lo[2], b.hi[2]};
  const IAB p = interval_ab(th), q = interval_ab(tp);
  const Interval u = th - tp + t;
  const Interval su = detail::sin(u), cu = detail::cos(u);
  const Interval u3 = Interval(3.0) * u;
  const Interval s3 = detail::sin(u3), c3 = detail::cos(u3);
  const Interval common = -(su * p.a * q.a) - Interval(3.0) * s3 * p.b * q.b;
  const Interval d0 = common + cu * p.a_th * q.a + c3 * p.b_th * q.b;
  const Interval d1 = -common + cu * p.a * q.a_th + c3 * p.b * q.b_th;
  const Interval d2 = common + detail::sin(t + Interval(shift(c)));
  return {std::min(LipschitzConstants::theta, d0.mag()), std::min(LipschitzConstants::theta_p, d1.mag()),
          std::min(LipschitzConstants::t, d2.mag())};
}

}  // namespace

double box_upper_bound(BstarCondition c, const Box& b) {
  double m[3];
  for (int i = 0; i < 3; ++i) m[i] = 0.5 * (b.lo[i] + b.hi[i]);
  const auto L = box_lipschitz(c, b);
  double s = bstar_objective(c, m[0], m[1], m[2]) + 1e-14;
  for (int i = 0; i < 3; ++i) s += L[i] * 0.5 * (b.hi[i] - b.lo[i]) * (1.0 + 1e-12);
  return s;
}

Box bstar_domain(BstarCondition c) {
  Box b;
  b.lo = {-kThird, -kThird, c == BstarCondition::Upper ? kTwoThirds : -kPi};
  b.hi = {kThird, kThird, c == BstarCondition::Upper ? kPi : -kTwoThirds};
  return b;
}

namespace {

struct WorstList {
  std::size_t cap;
  std::vector<Box> boxes;
  void offer(const Box& b) {
    if (boxes.size() == cap && b.bound <= boxes.back().bound) return;
    auto it = std::upper_bound(boxes.begin(), boxes.end(), b,
                               [](const Box& x, const Box& y) { return x.bound > y.bound; });
    boxes.insert(it, b);
    if (boxes.size() > cap) boxes.pop_back();
  }
};

struct ChunkOut {
  double sup = -1e300;
  std::uint64_t processed = 0, undischarged = 0;
  int max_depth = 0;
  bool exhausted = false;
  WorstList worst{0, {}};
};

}  // namespace

VerificationReport verify_condition(BstarCondition c, const VerifyOptions& opt) {
  if (!(opt.slack > 0.0)) throw DomainError("slack must be positive");
  if (opt.max_depth < 0 || opt.max_depth > 60) throw DomainError("max_depth must lie in [0, 60]");
  const Box dom = bstar_domain(c);
  constexpr int split0 = 4;
  std::vector<Box> roots;
  for (int i = 0; i < split0; ++i)
    for (int j = 0; j < split0; ++j)
      for (int l = 0; l < split0; ++l) {
        Box b;
        const int idx[3] = {i, j, l};
        for (int d = 0; d < 3; ++d) {
          const double w = (dom.hi[d] - dom.lo[d]) / split0;
          b.lo[d] = dom.lo[d] + w * idx[d];
          b.hi[d] = idx[d] == split0 - 1 ? dom.hi[d] : dom.lo[d] + w * (idx[d] + 1);
        }
        b.depth = 0;
        roots.push_back(b);
      }
  std::atomic<std::uint64_t> processed{0};
  std::vector<ChunkOut> outs(roots.size());
  detail::parallel_for(roots.size(), opt.threads, [&](std::size_t r) {
    ChunkOut& o = outs[r];
    o.worst.cap = opt.keep_worst;
    std::vector<Box> stack{roots[r]};
    while (!stack.empty()) {
      Box b = stack.back();
      stack.pop_back();
      b.bound = box_upper_bound(c, b);
      ++o.processed;
      o.max_depth = std::max(o.max_depth, b.depth);
      const bool over = processed.fetch_add(1) >= opt.max_boxes;
      if (b.bound <= opt.slack || b.depth >= opt.max_depth || over) {
        if (b.bound > opt.slack) ++o.undischarged;
        if (over && b.bound > opt.slack) o.exhausted = true;
        o.sup = std::max(o.sup, b.bound);
        o.worst.offer(b);
        continue;
      }
      const auto L = box_lipschitz(c, b);
      int dim = 0;
      double best = -1.0;
      for (int d = 0; d < 3; ++d) {
        const double w = L[d] * (b.hi[d] - b.lo[d]);
        if (w > best) {
          best = w;
          dim = d;
        }
      }
      const double mid = 0.5 * (b.lo[dim] + b.hi[dim]);
      Box left = b, right = b;
      left.hi[dim] = mid;
      right.lo[dim] = mid;
      left.depth = right.depth = b.depth + 1;
      stack.push_back(right);
      stack.push_back(left);
    }
  });
  VerificationReport rep;
  rep.condition = c == BstarCondition::Upper ? "t in [2pi/3, pi]: F_t <= cos(t - 2pi/3)"
                                             : "t in [-pi, -2pi/3]: F_t <= cos(t + 2pi/3)";
  rep.slack = opt.slack;
  rep.depth_limit = opt.max_depth;
  rep.sup_bound = -1e300;
  WorstList worst{opt.keep_worst, {}};
  for (const ChunkOut& o : outs) {
    rep.sup_bound = std::max(rep.sup_bound, o.sup);
    rep.boxes_processed += o.processed;
    rep.undischarged += o.undischarged;
    rep.max_depth = std::max(rep.max_depth, o.max_depth);
    rep.budget_exhausted = rep.budget_exhausted || o.exhausted;
    for (const Box& b : o.worst.boxes) worst.offer(b);
  }
  rep.worst_boxes = std::move(worst.boxes);
  rep.certified = rep.undischarged == 0 && rep.sup_bound <= opt.slack;
  return rep;
}

std::pair<VerificationReport, VerificationReport> verify_Bstar_k1(const VerifyOptions& opt) {
  return {verify_condition(BstarCondition::Upper, opt), verify_condition(BstarCondition::Lower, opt)};
}

std::pair<VerificationReport, VerificationReport> verify_Bstar_k1(double slack, int max_depth) {
  VerifyOptions opt;
  opt.slack = slack;
  opt.max_depth = max_depth;
  return verify_Bstar_k1(opt);
}

double sampled_max_objective(BstarCondition c, std::uint64_t samples, std::uint64_t seed, int threads) {
  const Box dom = bstar_domain(c);
  constexpr std::uint64_t chunk = 1 << 18;
  const std::uint64_t rounds = std::max<std::uint64_t>(1, (samples + chunk - 1) / chunk);
  std::vector<double> per(rounds, -1e300);
  detail::parallel_for(rounds, threads, [&](std::size_t r) {
    Rng rng(mix_seed(seed, r));
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const std::uint64_t n = std::min<std::uint64_t>(chunk, samples - std::min(samples, r * chunk));
    double m = -1e300;
    for (std::uint64_t i = 0; i < n; ++i) {
      double x[3];
      for (int d = 0; d < 3; ++d) x[d] = dom.lo[d] + (dom.hi[d] - dom.lo[d]) * u01(rng);
      m = std::max(m, bstar_objective(c, x[0], x[1], x[2]));
    }
    per[r] = m;
  });
  return *std::max_element(per.begin(), per.end());
}

// ---- sampled B(delta) ----

namespace {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

// Smallest chord distance from each rotated sample to the sample set, via an R-tree.
template <std::size_t D>
double worst_violation_rtree(const std::vector<SpherePoint>& pts, const std::vector<double>& ts,
                             double delta) {
  using Point = bg::model::point<double, D, bg::cs::cartesian>;
  std::vector<std::pair<Point, std::size_t>> items;
  items.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Point p;
    [&]<std::size_t... I>(std::index_sequence<I...>) { (bg::set<I>(p, pts[i][I]), ...); }
    (std::make_index_sequence<D>{});
    items.emplace_back(p, i);
  }
  bgi::rtree<std::pair<Point, std::size_t>, bgi::rstar<16>> tree(items.begin(), items.end());
  double worst = -1e300;
  std::vector<double> r(D);
  for (double t : ts) {
    for (const SpherePoint& q : pts) {
      r.assign(q.vec().begin(), q.vec().end());
      rotate_in_place(t, r);
      Point p;
      [&]<std::size_t... I>(std::index_sequence<I...>) { (bg::set<I>(p, r[I]), ...); }
      (std::make_index_sequence<D>{});
      for (auto it = tree.qbegin(bgi::nearest(p, 1)); it != tree.qend(); ++it) {
        const double d = geodesic_distance_raw(pts[it->second].coords(), r);
        worst = std::max(worst, std::abs(t) - d - delta);
      }
    }
  }
  return worst;
}

double worst_violation_brute(const std::vector<SpherePoint>& pts, const std::vector<double>& ts, double delta) {
  double worst = -1e300;
  std::vector<double> r;
  for (double t : ts)
    for (const SpherePoint& q : pts) {
      r.assign(q.vec().begin(), q.vec().end());
      rotate_in_place(t, r);
      double dmin = kPi;
      for (const SpherePoint& p : pts) dmin = std::min(dmin, geodesic_distance_raw(p.coords(), r));
      worst = std::max(worst, std::abs(t) - dmin - delta);
    }
  return worst;
}

}  // namespace

BCheck check_B_sampled(int k, double delta, const std::vector<SpherePoint>& fiber_samples, int t_grid,
                       double tol) {
  if (fiber_samples.empty()) throw DomainError("check_B_sampled needs at least one fiber sample");
  if (k < 1) throw DomainError("k must be at least 1");
  if (t_grid < 256) throw DomainError("t grid must have at least 256 points");
  for (const SpherePoint& p : fiber_samples)
    if (p.ambient_dim() != static_cast<std::size_t>(2 * k + 2))
      throw DimensionError("fiber samples must lie on S^{2k+1}");
  std::vector<double> ts;
  for (int i = 0; i < t_grid; ++i) {
    const double t = -kPi + kTwoPi * (i + 1) / t_grid;
    if (std::abs(t) >= delta && std::abs(t) <= kPi) ts.push_back(t);
  }
  if (ts.empty()) return {true, -1e300};
  double w;
  switch (k) {
    case 1: w = worst_violation_rtree<4>(fiber_samples, ts, delta); break;
    case 2: w = worst_violation_rtree<6>(fiber_samples, ts, delta); break;
    case 3: w = worst_violation_rtree<8>(fiber_samples, ts, delta); break;
    case 4: w = worst_violation_rtree<10>(fiber_samples, ts, delta); break;
    default: w = worst_violation_brute(fiber_samples, ts, delta); break;
  }
  return {w <= tol, w};
}

ABound derive_A_from_B(double delta, double t, double d_antipodal) {
  if (!(t >= 0.0 && t <= kPi - delta + 1e-15)) throw DomainError("t must lie in [0, pi - delta]");
  if (!(d_antipodal >= 0.0 && d_antipodal <= kPi)) throw DomainError("distance must lie in [0, pi]");
  ABound r;
  r.bound = kPi - d_antipodal;
  r.applies = d_antipodal >= (kPi - t) - delta;
  r.holds = !r.applies || r.bound <= t + delta + 1e-12;
  return r;
}

std::string transcript_json(const VerificationReport& upper, const VerificationReport& lower) {
  auto one = [](const VerificationReport& r) {
    nlohmann::json boxes = nlohmann::json::array();
    for (const Box& b : r.worst_boxes)
      boxes.push_back({{"lo", b.lo}, {"hi", b.hi}, {"depth", b.depth}, {"bound", b.bound}});
    return nlohmann::json{{"condition", r.condition},
                          {"certified", r.certified},
                          {"sup_bound", r.sup_bound},
                          {"slack", r.slack},
                          {"boxes_processed", r.boxes_processed},
                          {"max_depth", r.max_depth},
                          {"depth_limit", r.depth_limit},
                          {"undischarged", r.undischarged},
                          {"budget_exhausted", r.budget_exhausted},
                          {"worst_boxes", boxes}};
  };
  nlohmann::json j{{"lipschitz",
                    {{"theta", LipschitzConstants::theta},
                     {"theta_p", LipschitzConstants::theta_p},
                     {"t", LipschitzConstants::t}}},
                   {"reports", {one(upper), one(lower)}}};
  return j.dump(2);
}

}  // namespace epcgh
