#include "epcgh/epc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "detail.hpp"

namespace epcgh {

using detail::clamp_unit;

namespace {

std::atomic<int> g_threads{0};

void unit_from_angles(double phi, double theta, double* u) {
  const double st = std::sin(theta);
  u[0] = st * std::cos(phi);
  u[1] = st * std::sin(phi);
  u[2] = std::cos(theta);
}

Param angles_from_unit(const double* u) {
  const double theta = std::acos(clamp_unit(u[2]));
  const double phi = (u[0] == 0.0 && u[1] == 0.0) ? 0.0 : std::atan2(u[1], u[0]);
  return {canonical_angle(phi), theta};
}

bool param_less(const Param& p, const Param& q) {
  if (p.a != q.a) return p.a < q.a;
  return p.b < q.b;
}

}  // namespace

int default_threads() {
  const int n = g_threads.load();
  if (n > 0) return n;
  const unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : static_cast<int>(h);
}

void set_default_threads(int n) { g_threads = n < 0 ? 0 : n; }

// ---- EpcSpec ----

EpcSpec EpcSpec::tmc_odd(int k) {
  if (k < 1) throw DomainError("tmc-odd needs k >= 1");
  return {"tmc-odd:" + std::to_string(k), EmbeddingKind::TmcOdd, k, 1, 2 * k + 1};
}

EpcSpec EpcSpec::tmc_even(int k) {
  if (k < 1) throw DomainError("tmc-even needs k >= 1");
  return {"tmc-even:" + std::to_string(k), EmbeddingKind::TmcEven, k, 1, 2 * k};
}

EpcSpec EpcSpec::alpha() { return {"alpha", EmbeddingKind::Alpha, 0, 1, 2}; }

EpcSpec EpcSpec::sigma() { return {"sigma", EmbeddingKind::Sigma, 0, 2, 3}; }

EpcSpec EpcSpec::equatorial(int m, int n) {
  if (m < 1 || m > 2) throw DomainError("equatorial spec supports m in {1, 2}");
  if (n <= m) throw DomainError("equatorial spec needs m < n");
  return {"equatorial:" + std::to_string(m) + ":" + std::to_string(n), EmbeddingKind::Equatorial, 0, m,
          n};
}

EpcSpec EpcSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  auto num = [&](std::size_t i) {
    if (i >= parts.size()) throw DomainError("missing integer in spec '" + text + "'");
    std::size_t used = 0;
    const int v = std::stoi(parts[i], &used);
    if (used != parts[i].size()) throw DomainError("bad integer in spec '" + text + "'");
    return v;
  };
  if (parts.empty()) throw DomainError("empty spec");
  const std::string& head = parts[0];
  if (head == "tmc-odd" && parts.size() == 2) return tmc_odd(num(1));
  if (head == "tmc-even" && parts.size() == 2) return tmc_even(num(1));
  if (head == "alpha" && parts.size() == 1) return alpha();
  if (head == "sigma" && parts.size() == 1) return sigma();
  if (head == "equatorial" && parts.size() == 3) return equatorial(num(1), num(2));
  throw DomainError("unknown spec '" + text + "'");
}

void EpcSpec::embed_into(const Param& p, std::span<double> out) const {
  switch (kind) {
    case EmbeddingKind::TmcOdd:
      gamma_odd_into(k, p.a, out);
      return;
    case EmbeddingKind::TmcEven:
      gamma_even_into(k, p.a, out);
      return;
    case EmbeddingKind::Alpha:
      alpha_into(p.a, out);
      return;
    case EmbeddingKind::Sigma:
      sigma_into(p.a, p.b, out);
      return;
    case EmbeddingKind::Equatorial:
      std::fill(out.begin(), out.end(), 0.0);
      if (domain_dim == 1) {
        out[0] = std::cos(p.a);
        out[1] = std::sin(p.a);
      } else {
        unit_from_angles(p.a, p.b, out.data());
      }
      return;
  }
}

SpherePoint EpcSpec::embed(const Param& p) const {
  std::vector<double> v(ambient_size());
  embed_into(p, v);
  return make_unchecked(std::move(v));
}

double EpcSpec::domain_distance(const Param& p, const Param& q) const {
  if (domain_dim == 1) return circle_distance(p.a, q.a);
  double u[3], v[3];
  unit_from_angles(p.a, p.b, u);
  unit_from_angles(q.a, q.b, v);
  return std::acos(clamp_unit(u[0] * v[0] + u[1] * v[1] + u[2] * v[2]));
}

Param EpcSpec::canonical(const Param& p) const {
  if (domain_dim == 1) return {canonical_angle(p.a), 0.0};
  double u[3];
  unit_from_angles(p.a, p.b, u);
  return angles_from_unit(u);
}

// ---- Projector ----

namespace {

// Lift of a domain unit vector for the surface specs.
void lift_unit(const EpcSpec& s, const double* u, std::span<double> out) {
  if (s.kind == EmbeddingKind::Sigma) {
    sigma_from_unit(u, out);
  } else {
    std::fill(out.begin(), out.end(), 0.0);
    out[0] = u[0];
    out[1] = u[1];
    out[2] = u[2];
  }
}

void tangent_basis(const double* u, double* e1, double* e2) {
  int m = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(u[i]) < std::abs(u[m])) m = i;
  double a[3] = {0, 0, 0};
  a[m] = 1.0;
  const double c = a[0] * u[0] + a[1] * u[1] + a[2] * u[2];
  double n = 0.0;
  for (int i = 0; i < 3; ++i) {
    e1[i] = a[i] - c * u[i];
    n += e1[i] * e1[i];
  }
  n = std::sqrt(n);
  for (int i = 0; i < 3; ++i) e1[i] /= n;
  e2[0] = u[1] * e1[2] - u[2] * e1[1];
  e2[1] = u[2] * e1[0] - u[0] * e1[2];
  e2[2] = u[0] * e1[1] - u[1] * e1[0];
}

void chart_point(const double* u0, const double* e1, const double* e2, double a, double b, double* u) {
  double n = 0.0;
  for (int i = 0; i < 3; ++i) {
    u[i] = u0[i] + a * e1[i] + b * e2[i];
    n += u[i] * u[i];
  }
  n = std::sqrt(n);
  for (int i = 0; i < 3; ++i) u[i] /= n;
}

}  // namespace

Projector::Projector(EpcSpec spec, int grid, double tie_tol) : spec_(std::move(spec)), tie_tol_(tie_tol) {
  if (grid < 64) throw DomainError("projection grid must be at least 64");
  const std::size_t dim = spec_.ambient_size();
  std::vector<double> a(dim), b(dim), c(dim);
  if (spec_.domain_dim == 1) {
    n1_ = static_cast<std::size_t>(grid);
    n2_ = 1;
    table_.resize(n1_ * dim);
    for (std::size_t i = 0; i < n1_; ++i)
      spec_.embed_into(grid_param(i), std::span<double>(table_.data() + i * dim, dim));
    step_ = kTwoPi / static_cast<double>(n1_);
    // Largest |c''| over a fine sweep, with a safety factor.
    const double h = 1e-4;
    double m = 0.0;
    for (int i = 0; i < 4096; ++i) {
      const double t = -kPi + kTwoPi * i / 4096.0;
      spec_.embed_into({t - h}, a);
      spec_.embed_into({t}, b);
      spec_.embed_into({t + h}, c);
      double s = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double d2 = (a[j] - 2 * b[j] + c[j]) / (h * h);
        s += d2 * d2;
      }
      m = std::max(m, std::sqrt(s));
    }
    curvature_bound_ = 1.25 * m + 1e-9;
  } else {
    n1_ = static_cast<std::size_t>(std::max(16, grid / 8));
    n2_ = static_cast<std::size_t>(std::max(8, grid / 16));
    table_.resize(n1_ * n2_ * dim);
    units_.resize(n1_ * n2_ * 3);
    for (std::size_t i = 0; i < n1_ * n2_; ++i) {
      const Param p = grid_param(i);
      unit_from_angles(p.a, p.b, units_.data() + 3 * i);
      lift_unit(spec_, units_.data() + 3 * i, std::span<double>(table_.data() + i * dim, dim));
    }
    step_ = std::max(kTwoPi / static_cast<double>(n1_), kPi / static_cast<double>(n2_));
    // Second derivative of the lift along unit-speed great circles, sampled.
    Rng rng(12345);
    const double h = 1e-4;
    double m = 0.0;
    for (int i = 0; i < 4000; ++i) {
      double u[3], e1[3], e2[3], v[3], p[3];
      sample_sphere_into(rng, std::span<double>(u, 3));
      tangent_basis(u, e1, e2);
      const double ang = kTwoPi * (i / 4000.0);
      for (int j = 0; j < 3; ++j) v[j] = std::cos(ang) * e1[j] + std::sin(ang) * e2[j];
      for (int s = -1; s <= 1; ++s) {
        for (int j = 0; j < 3; ++j) p[j] = std::cos(s * h) * u[j] + std::sin(s * h) * v[j];
        lift_unit(spec_, p, s < 0 ? std::span<double>(a) : (s == 0 ? std::span<double>(b) : std::span<double>(c)));
      }
      double s2 = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double d2 = (a[j] - 2 * b[j] + c[j]) / (h * h);
        s2 += d2 * d2;
      }
      m = std::max(m, std::sqrt(s2));
    }
    curvature_bound_ = 1.5 * m + 1e-9;
  }
  const std::size_t npts = n1_ * n2_;
  cols_.resize(table_.size());
  for (std::size_t i = 0; i < npts; ++i)
    for (std::size_t j = 0; j < dim; ++j) cols_[j * npts + i] = table_[i * dim + j];
}

void Projector::grid_dots(std::span<const double> y, std::vector<double>& dots) const {
  const std::size_t npts = n1_ * n2_;
  dots.assign(npts, 0.0);
  double* d = dots.data();
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double c = y[j];
    const double* col = cols_.data() + j * npts;
    for (std::size_t i = 0; i < npts; ++i) d[i] += c * col[i];
  }
}

Param Projector::grid_param(std::size_t i) const {
  if (spec_.domain_dim == 1) return {-kPi + kTwoPi * static_cast<double>(i + 1) / static_cast<double>(n1_), 0.0};
  const std::size_t pi = i / n2_, tj = i % n2_;
  return {-kPi + kTwoPi * static_cast<double>(pi + 1) / static_cast<double>(n1_),
          kPi * (static_cast<double>(tj) + 0.5) / static_cast<double>(n2_)};
}

void Projector::check_dim(std::span<const double> y) const {
  if (y.size() != spec_.ambient_size())
    throw DimensionError("point dimension does not match the spec's ambient sphere");
}

Projector::Basin Projector::refine_curve(std::span<const double> y, std::size_t i) const {
  const std::size_t dim = spec_.ambient_size();
  std::vector<double> buf(dim);
  auto f = [&](double t) {
    spec_.embed_into({t}, buf);
    return dot(y, buf);
  };
  const double t0 = grid_param(i).a;
  const double g0 = dot(y, std::span<const double>(table_.data() + i * dim, dim));
  auto [t, v] = detail::golden_max(f, t0 - step_, t0 + step_, 1e-10);
  // flat tops leave golden section about 1e-8 off; Newton on central differences
  for (int it = 0; it < 2; ++it) {
    const double h = 1e-4;
    const double fp = f(t + h), fm = f(t - h), fc = f(t);
    const double d2 = (fp - 2.0 * fc + fm) / (h * h);
    if (!(d2 < 0.0)) break;
    const double dt = -(fp - fm) / (2.0 * h) / d2;
    if (std::abs(dt) > 1e-6) break;
    // values here differ only at rounding level, so the step is not value-checked
    t += dt;
    v = f(t);
  }
  if (v < g0) return {{t0, 0.0}, g0};
  return {{canonical_angle(t), 0.0}, v};
}

Projector::Basin Projector::refine_surface(std::span<const double> y, std::size_t i) const {
  const std::size_t dim = spec_.ambient_size();
  const double* u0 = units_.data() + 3 * i;
  double e1[3], e2[3];
  tangent_basis(u0, e1, e2);
  std::vector<double> buf(dim);
  auto f = [&](const double* ab) {
    double u[3];
    chart_point(u0, e1, e2, ab[0], ab[1], u);
    lift_unit(spec_, u, buf);
    return -dot(y, buf);
  };
  std::vector<double> x{0.0, 0.0};
  const double v = -detail::nelder_mead(f, x, 0.5 * step_, 1e-9, 200);
  const double g0 = dot(y, std::span<const double>(table_.data() + i * dim, dim));
  if (v < g0) return {grid_param(i), g0};
  double u[3];
  chart_point(u0, e1, e2, x[0], x[1], u);
  return {angles_from_unit(u), v};
}

std::vector<Projector::Basin> Projector::basins(std::span<const double> y, double margin, bool all) const {
  check_dim(y);
  thread_local std::vector<double> dots;
  grid_dots(y, dots);
  const double r = spec_.domain_dim == 1
                       ? 0.5 * step_
                       : 0.5 * std::hypot(kTwoPi / static_cast<double>(n1_), kPi / static_cast<double>(n2_));
  const double gm = 0.5 * curvature_bound_ * r * r;
  // Grid points that cannot lead to a basin within `margin` of the best are not examined.
  double floor_dot = -std::numeric_limits<double>::infinity();
  if (!all) {
    const double gmax = *std::max_element(dots.begin(), dots.end());
    floor_dot = std::cos(std::min(kPi, std::acos(clamp_unit(gmax)) + margin)) - gm;
  }
  // Grid local maxima; equal neighbors are resolved in favor of the smaller index.
  std::vector<std::size_t> cand;
  auto beats = [&](std::size_t i, std::size_t nb) {
    return dots[i] > dots[nb] || (dots[i] == dots[nb] && i < nb);
  };
  if (spec_.domain_dim == 1) {
    for (std::size_t i = 0; i < n1_; ++i) {
      if (dots[i] < floor_dot) continue;
      const std::size_t p = (i + n1_ - 1) % n1_, q = (i + 1) % n1_;
      if (beats(i, p) && beats(i, q)) cand.push_back(i);
    }
  } else {
    for (std::size_t i = 0; i < n1_; ++i) {
      for (std::size_t j = 0; j < n2_; ++j) {
        const std::size_t idx = i * n2_ + j;
        if (dots[idx] < floor_dot) continue;
        bool ok = true;
        for (int di = -1; di <= 1 && ok; ++di) {
          const std::size_t ii = static_cast<std::size_t>(static_cast<long>(i + n1_) + di) % n1_;
          for (int dj = -1; dj <= 1 && ok; ++dj) {
            if (di == 0 && dj == 0) continue;
            const long jj = static_cast<long>(j) + dj;
            std::size_t nb;
            if (jj < 0 || jj >= static_cast<long>(n2_)) {
              // across the pole
              nb = ((ii + n1_ / 2) % n1_) * n2_ + j;
            } else {
              nb = ii * n2_ + static_cast<std::size_t>(jj);
            }
            if (nb != idx && !beats(idx, nb)) ok = false;
          }
        }
        if (ok) cand.push_back(idx);
      }
    }
  }
  std::sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
    return dots[a] > dots[b] || (dots[a] == dots[b] && a < b);
  });
  std::vector<Basin> out;
  double best = -2.0;
  for (std::size_t c : cand) {
    if (!all && !out.empty()) {
      const double bound = dots[c] + gm;
      if (bound < 1.0 && std::acos(bound) > std::acos(clamp_unit(best)) + margin) break;
    }
    const Basin b = spec_.domain_dim == 1 ? refine_curve(y, c) : refine_surface(y, c);
    bool dup = false;
    for (Basin& o : out) {
      if (spec_.domain_distance(o.param, b.param) < 1e-7) {
        if (b.dot > o.dot) o = b;
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(b);
    best = std::max(best, b.dot);
  }
  std::stable_sort(out.begin(), out.end(), [](const Basin& a, const Basin& b) { return a.dot > b.dot; });
  return out;
}

std::vector<Param> Projector::plateau_ties(std::span<const double>, const std::vector<double>& dots,
                                           double cutoff, const std::vector<Param>& listed) const {
  std::vector<Param> extra;
  const double sep = 1.5 * step_;
  for (std::size_t i = 0; i < dots.size(); ++i) {
    if (dots[i] < cutoff) continue;
    const Param p = grid_param(i);
    bool far = true;
    for (const Param& q : listed) {
      if (spec_.domain_distance(p, q) < sep) {
        far = false;
        break;
      }
    }
    if (far) extra.push_back(spec_.canonical(p));
  }
  return extra;
}

ProjectionResult Projector::project(std::span<const double> y, double tie_tol) const {
  const std::vector<Basin> bs = basins(y, tie_tol);
  const double dbest = std::acos(clamp_unit(bs.front().dot));
  std::vector<Param> ties;
  Param arg = bs.front().param;
  for (const Basin& b : bs) {
    const double d = std::acos(clamp_unit(b.dot));
    if (d - dbest > tie_tol) continue;
    ties.push_back(spec_.canonical(b.param));
    if (d - dbest <= 1e-12 && param_less(spec_.canonical(b.param), spec_.canonical(arg))) arg = b.param;
  }
  arg = spec_.canonical(arg);
  // Grid points within tolerance that no refined tie accounts for (flat plateaus).
  thread_local std::vector<double> dots;
  grid_dots(y, dots);
  const double cutoff = std::cos(std::min(kPi, dbest + tie_tol));
  const std::vector<Param> extra = plateau_ties(y, dots, cutoff, ties);

  ProjectionResult res;
  res.argmin_param = arg;
  res.distance = std::acos(clamp_unit(dot(y, spec_.embed(arg).coords())));
  for (const Param& p : ties)
    if (spec_.domain_distance(p, arg) > 0.0) res.near_ties.push_back(p);
  res.near_ties.insert(res.near_ties.end(), extra.begin(), extra.end());
  return res;
}

Param Projector::psi(std::span<const double> y) const {
  const std::vector<Basin> bs = basins(y, 1e-12);
  const double dbest = std::acos(clamp_unit(bs.front().dot));
  Param arg = spec_.canonical(bs.front().param);
  for (const Basin& b : bs) {
    if (std::acos(clamp_unit(b.dot)) - dbest > 1e-12) continue;
    const Param p = spec_.canonical(b.param);
    if (param_less(p, arg)) arg = p;
  }
  return arg;
}

double Projector::distance(std::span<const double> y) const {
  return std::acos(clamp_unit(basins(y, 0.0).front().dot));
}

ProjectionResult project(const EpcSpec& spec, const SpherePoint& y, int grid, double tie_tol) {
  return Projector(spec, grid, tie_tol).project(y.coords());
}

Param psi(const EpcSpec& spec, const SpherePoint& y) { return Projector(spec).psi(y.coords()); }

// ---- sampling estimators ----

namespace {

constexpr std::uint64_t kCoverRound = 16384;
constexpr std::uint64_t kRandomRound = 4096;
constexpr std::uint64_t kBoundaryRound = 16384;
constexpr int kBoundaryStarts = 128;
constexpr int kClimbKeep = 4;
constexpr int kClimbSteps = 48;
constexpr int kAscentStarts = 8;
constexpr int kAscentSteps = 120;
constexpr double kDiscTieTol = 1e-9;
constexpr std::uint64_t kBoundaryStream = 0xB0B0;

std::uint64_t rounds_for(std::uint64_t budget, std::uint64_t round) {
  return std::max<std::uint64_t>(1, (budget + round - 1) / round);
}

struct Best {
  double value = -1.0;
  CorrElement a, b;

  void offer(double v, const Param& pa, std::span<const double> ya, const Param& pb,
             std::span<const double> yb) {
    if (!(v > value)) return;
    value = v;
    a = {pa, std::vector<double>(ya.begin(), ya.end())};
    b = {pb, std::vector<double>(yb.begin(), yb.end())};
  }
  void merge(const Best& o) {
    if (o.value > value) *this = o;
  }
};

struct DiscBest {
  double value = -1.0;
  std::vector<double> y;
  std::vector<Param> ties;
  void merge(const DiscBest& o) {
    if (o.value > value) *this = o;
  }
};

std::vector<double> midpoint(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = a[i] + b[i];
  detail::normalize(m);
  return m;
}

double gdist(std::span<const double> a, std::span<const double> b) { return geodesic_distance_raw(a, b); }

struct Crossing {
  std::vector<double> lo, hi, dir;
  Param plo, phi;
  double score = -1.0;
};

struct RoundStats {
  std::uint64_t projections = 0;
  int accepted = 0;
};

class BoundaryWorker {
 public:
  BoundaryWorker(const Projector& P, Rng& rng, RoundStats& st, Best& dis, DiscBest& disc)
      : P_(P), S_(P.spec()), rng_(rng), st_(st), dis_(dis), disc_(disc) {}

  Param psi(const std::vector<double>& y) {
    ++st_.projections;
    return P_.psi(y);
  }

  std::optional<Crossing> bisect(std::vector<double> lo, std::vector<double> hi, Param plo, Param phi) {
    double jump = S_.domain_distance(plo, phi);
    if (jump < 1e-9) return std::nullopt;
    double gap = gdist(lo, hi);
    dis_.offer(jump - gap, plo, lo, phi, hi);
    Crossing c;
    for (int it = 0; it < 200 && gap > 1e-12; ++it) {
      std::vector<double> mid(lo.size());
      double n = 0.0;
      for (std::size_t i = 0; i < lo.size(); ++i) {
        mid[i] = lo[i] + hi[i];
        n += mid[i] * mid[i];
      }
      if (n < 1e-12) return std::nullopt;
      detail::normalize(mid);
      const Param pm = psi(mid);
      if (S_.domain_distance(plo, pm) >= S_.domain_distance(pm, phi)) {
        hi = std::move(mid);
        phi = pm;
      } else {
        lo = std::move(mid);
        plo = pm;
      }
      gap = gdist(lo, hi);
      jump = S_.domain_distance(plo, phi);
      dis_.offer(jump - gap, plo, lo, phi, hi);
      if (c.dir.empty() && gap < 1e-6) c.dir = direction(lo, hi);
    }
    if (jump < 1e-9) return std::nullopt;
    if (c.dir.empty()) c.dir = direction(lo, hi);
    const double diam = record_ties(midpoint(lo, hi));
    c.lo = std::move(lo);
    c.hi = std::move(hi);
    c.plo = plo;
    c.phi = phi;
    c.score = std::max(jump - gap, diam);
    return c;
  }

  std::optional<Crossing> start() {
    std::vector<double> y(S_.ambient_size());
    sample_sphere_into(rng_, y);
    ++st_.projections;
    const auto bs = P_.basins(y, 0.0, true);
    std::vector<double> z(y.size());
    Param pz;
    if (bs.size() >= 2) {
      S_.embed_into(bs[1].param, z);
    } else {
      sample_sphere_into(rng_, z);
    }
    const Param py = psi(y);
    pz = psi(z);
    return bisect(std::move(y), std::move(z), py, pz);
  }

  // Near-tie diameter at m; offered to both the disc and dis records.
  double record_ties(const std::vector<double>& m) {
    ++st_.projections;
    const ProjectionResult pr = P_.project(m, kDiscTieTol);
    std::vector<Param> ties{pr.argmin_param};
    ties.insert(ties.end(), pr.near_ties.begin(), pr.near_ties.end());
    double diam = 0.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < ties.size(); ++i)
      for (std::size_t j = i + 1; j < ties.size(); ++j) {
        const double d = S_.domain_distance(ties[i], ties[j]);
        if (d > diam) {
          diam = d;
          bi = i;
          bj = j;
        }
      }
    if (diam > disc_.value) {
      disc_.value = diam;
      disc_.y = m;
      disc_.ties = ties;
    }
    if (ties.size() >= 2) dis_.offer(diam, ties[bi], m, ties[bj], m);
    return diam;
  }

  // Ascent of the distance to the image from a random start. Local maxima of that distance have
  // several nearest points, including tie sets of codimension > 1 that bisection cannot hit.
  void ascend() {
    std::vector<double> y(S_.ambient_size()), x(y.size()), dir(y.size());
    sample_sphere_into(rng_, y);
    double eta = 0.1;
    double rho = -1.0;
    for (int it = 0; it < kAscentSteps && eta > 1e-14; ++it) {
      ++st_.projections;
      const auto bs = P_.basins(y, eta, false);
      const double best = std::acos(clamp_unit(bs.front().dot));
      rho = best;
      std::fill(dir.begin(), dir.end(), 0.0);
      for (const auto& b : bs) {
        if (std::acos(clamp_unit(b.dot)) > best + eta) continue;
        S_.embed_into(b.param, x);
        const double c = dot(x, y);
        for (std::size_t i = 0; i < y.size(); ++i) dir[i] -= x[i] - c * y[i];
      }
      if (norm(dir) < 1e-15) break;
      detail::normalize(dir);
      for (double& v : dir) v *= eta;
      std::vector<double> y2 = exp_map(y, dir);
      ++st_.projections;
      if (P_.distance(y2) > rho) {
        y = std::move(y2);
        eta = std::min(0.5, eta * 1.5);
      } else {
        eta *= 0.5;
      }
    }
    record_ties(y);
  }

  void climb(Crossing& c) {
    std::normal_distribution<double> g(0.0, 1.0);
    double sigma = 1e-2;
    for (int step = 0; step < kClimbSteps; ++step) {
      const std::vector<double> m = midpoint(c.lo, c.hi);
      std::vector<double> v(m.size());
      for (double& x : v) x = sigma * g(rng_) / std::sqrt(static_cast<double>(m.size()));
      const std::vector<double> m2 = exp_map(m, v);
      const double eps = 3.0 * sigma + 1e-9;
      std::vector<double> dm(c.dir.size()), dp(c.dir.size());
      for (std::size_t i = 0; i < dm.size(); ++i) {
        dm[i] = -eps * c.dir[i];
        dp[i] = eps * c.dir[i];
      }
      std::vector<double> lo = exp_map(m2, dm), hi = exp_map(m2, dp);
      const Param plo = psi(lo), phi = psi(hi);
      auto nc = bisect(std::move(lo), std::move(hi), plo, phi);
      if (nc && nc->score > c.score) {
        c = std::move(*nc);
        sigma = std::min(0.5, sigma * 1.5);
        ++st_.accepted;
      } else {
        sigma = std::max(1e-9, sigma * 0.8);
      }
    }
  }

 private:
  static std::vector<double> direction(const std::vector<double>& lo, const std::vector<double>& hi) {
    std::vector<double> d(lo.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = hi[i] - lo[i];
    detail::normalize(d);
    return d;
  }

  const Projector& P_;
  const EpcSpec& S_;
  Rng& rng_;
  RoundStats& st_;
  Best& dis_;
  DiscBest& disc_;
};

struct PhaseResult {
  Best dis;
  DiscBest disc;
  std::uint64_t projections = 0;
  int accepted = 0;
};

PhaseResult boundary_phase(const Projector& P, std::uint64_t budget, std::uint64_t seed, int threads) {
  const std::uint64_t rounds = rounds_for(budget, kBoundaryRound);
  std::vector<PhaseResult> per(rounds);
  detail::parallel_for(rounds, threads, [&](std::size_t r) {
    Rng rng(mix_seed(seed ^ kBoundaryStream, r));
    RoundStats st;
    PhaseResult& out = per[r];
    BoundaryWorker w(P, rng, st, out.dis, out.disc);
    std::vector<Crossing> top;
    for (int s = 0; s < kBoundaryStarts; ++s) {
      auto c = w.start();
      if (!c) continue;
      top.push_back(std::move(*c));
    }
    std::stable_sort(top.begin(), top.end(), [](const Crossing& a, const Crossing& b) { return a.score > b.score; });
    std::vector<Crossing> keep;
    for (Crossing& c : top) {
      if (static_cast<int>(keep.size()) >= kClimbKeep) break;
      const std::vector<double> m = midpoint(c.lo, c.hi);
      bool near = false;
      for (const Crossing& k : keep)
        if (gdist(m, midpoint(k.lo, k.hi)) < 1e-3) near = true;
      if (!near) keep.push_back(std::move(c));
    }
    for (Crossing& c : keep) w.climb(c);
    for (int s = 0; s < kAscentStarts; ++s) w.ascend();
    out.projections = st.projections;
    out.accepted = st.accepted;
  });
  PhaseResult total;
  for (const PhaseResult& p : per) {
    total.dis.merge(p.dis);
    total.disc.merge(p.disc);
    total.projections += p.projections;
    total.accepted += p.accepted;
  }
  return total;
}

// max over t of |d(q, T_t q') - d_1(0, t)| for fiber-0 points q, q'.
struct TmcPairValue {
  double value;
  double t;
};

TmcPairValue tmc_pair_value(int k, const std::vector<double>& q, const std::vector<double>& qp,
                            const std::vector<double>& cs) {
  constexpr int nt = 128;
  const std::size_t dim = q.size();
  std::vector<double> rot(dim);
  auto val = [&](double t) {
    rot.assign(qp.begin(), qp.end());
    rotate_in_place(t, rot);
    return std::abs(gdist(q, rot) - std::abs(canonical_angle(t)));
  };
  double bv = -1.0;
  int bi = 0;
  for (int i = 0; i < nt; ++i) {
    // cs holds cos/sin of (2l+1) t_i for the fixed grid
    const double* row = cs.data() + static_cast<std::size_t>(i) * dim;
    double s = 0.0;
    for (int l = 0; l <= k; ++l) {
      const double c = row[2 * l], sn = row[2 * l + 1];
      const double x = qp[2 * l], y = qp[2 * l + 1];
      s += q[2 * l] * (c * x - sn * y) + q[2 * l + 1] * (sn * x + c * y);
    }
    const double t = -kPi + kTwoPi * (i + 1) / nt;
    const double v = std::abs(std::acos(clamp_unit(s)) - std::abs(t));
    if (v > bv) {
      bv = v;
      bi = i;
    }
  }
  const double t0 = -kPi + kTwoPi * (bi + 1) / nt;
  const double h = kTwoPi / nt;
  auto [t, v] = detail::golden_max(val, t0 - h, t0 + h, 1e-12);
  if (v < bv) return {bv, t0};
  return {v, canonical_angle(t)};
}

std::vector<double> rotation_table(int k) {
  constexpr int nt = 128;
  std::vector<double> cs(static_cast<std::size_t>(nt) * (2 * k + 2));
  for (int i = 0; i < nt; ++i) {
    const double t = -kPi + kTwoPi * (i + 1) / nt;
    for (int l = 0; l <= k; ++l) {
      cs[static_cast<std::size_t>(i) * (2 * k + 2) + 2 * l] = std::cos((2 * l + 1) * t);
      cs[static_cast<std::size_t>(i) * (2 * k + 2) + 2 * l + 1] = std::sin((2 * l + 1) * t);
    }
  }
  return cs;
}

void to_fiber0(const Projector& P, std::vector<double>& y) {
  const double t = P.psi(y).a;
  rotate_in_place(-t, y);
}

PhaseResult random_phase(const Projector& P, std::uint64_t budget, std::uint64_t seed, bool refine, int threads) {
  const EpcSpec& S = P.spec();
  const std::uint64_t rounds = rounds_for(budget, kRandomRound);
  const bool tmc = S.kind == EmbeddingKind::TmcOdd;
  const std::vector<double> cs = tmc ? rotation_table(S.k) : std::vector<double>{};
  std::vector<PhaseResult> per(rounds);
  detail::parallel_for(rounds, threads, [&](std::size_t r) {
    Rng rng(mix_seed(seed, r));
    PhaseResult& out = per[r];
    const std::size_t dim = S.ambient_size();
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    struct Cand {
      std::vector<double> y, yp;
      double value;
    };
    std::vector<Cand> top;
    auto keep_top = [&](Cand c) {
      top.push_back(std::move(c));
      std::stable_sort(top.begin(), top.end(), [](const Cand& a, const Cand& b) { return a.value > b.value; });
      if (top.size() > static_cast<std::size_t>(kClimbKeep)) top.pop_back();
    };
    auto perturb = [&](const std::vector<double>& y, double sigma) {
      std::vector<double> v(y.size());
      for (double& x : v) x = sigma * g(rng) / std::sqrt(static_cast<double>(y.size()));
      return exp_map(y, v);
    };

    if (tmc) {
      auto eval = [&](const std::vector<double>& q, const std::vector<double>& qp) {
        const TmcPairValue pv = tmc_pair_value(S.k, q, qp, cs);
        std::vector<double> rot = qp;
        rotate_in_place(pv.t, rot);
        out.dis.offer(pv.value, Param{0.0}, q, Param{pv.t}, rot);
        return pv.value;
      };
      std::vector<double> prev;
      for (std::uint64_t i = 0; i < kRandomRound; ++i) {
        std::vector<double> q(dim);
        sample_sphere_into(rng, q);
        to_fiber0(P, q);
        ++out.projections;
        if (!prev.empty()) {
          const double v = eval(prev, q);
          if (refine && (top.size() < static_cast<std::size_t>(kClimbKeep) || v > top.back().value))
            keep_top({prev, q, v});
        }
        prev = std::move(q);
      }
      if (refine) {
        for (Cand& c : top) {
          double sigma = 1e-2;
          for (int s = 0; s < kClimbSteps; ++s) {
            std::vector<double> q = perturb(c.y, sigma), qp = perturb(c.yp, sigma);
            to_fiber0(P, q);
            to_fiber0(P, qp);
            out.projections += 2;
            const double v = eval(q, qp);
            if (v > c.value) {
              c = {std::move(q), std::move(qp), v};
              sigma = std::min(0.5, sigma * 1.5);
              ++out.accepted;
            } else {
              sigma = std::max(1e-9, sigma * 0.8);
            }
          }
        }
      }
    } else {
      auto eval = [&](const std::vector<double>& y, const std::vector<double>& yp) {
        const Param a = P.psi(y), b = P.psi(yp);
        out.projections += 2;
        const double v = std::abs(S.domain_distance(a, b) - gdist(y, yp));
        out.dis.offer(v, a, y, b, yp);
        return v;
      };
      for (std::uint64_t i = 0; i < kRandomRound / 2; ++i) {
        std::vector<double> y(dim), yp(dim);
        sample_sphere_into(rng, y);
        if (i % 2 == 0) {
          sample_sphere_into(rng, yp);
        } else {
          yp = perturb(y, std::pow(10.0, -4.0 * u01(rng)));
        }
        const double v = eval(y, yp);
        if (refine && (top.size() < static_cast<std::size_t>(kClimbKeep) || v > top.back().value))
          keep_top({y, yp, v});
      }
      if (refine) {
        for (Cand& c : top) {
          double sigma = 1e-2;
          for (int s = 0; s < kClimbSteps; ++s) {
            std::vector<double> y = perturb(c.y, sigma), yp = perturb(c.yp, sigma);
            const double v = eval(y, yp);
            if (v > c.value) {
              c = {std::move(y), std::move(yp), v};
              sigma = std::min(0.5, sigma * 1.5);
              ++out.accepted;
            } else {
              sigma = std::max(1e-9, sigma * 0.8);
            }
          }
        }
      }
    }
  });
  PhaseResult total;
  for (const PhaseResult& p : per) {
    total.dis.merge(p.dis);
    total.projections += p.projections;
    total.accepted += p.accepted;
  }
  return total;
}

void check_budget(std::uint64_t budget) {
  if (budget < 1000) throw DomainError("budget must be at least 1000");
}

}  // namespace

double covering_radius(const EpcSpec& spec, std::uint64_t samples, std::uint64_t seed, int threads) {
  if (samples < 1) throw DomainError("covering radius needs at least one sample");
  const Projector P(spec);
  const std::uint64_t rounds = (samples + kCoverRound - 1) / kCoverRound;
  std::vector<double> per(rounds, 0.0);
  detail::parallel_for(rounds, threads, [&](std::size_t r) {
    Rng rng(mix_seed(seed, r));
    const std::uint64_t n = std::min<std::uint64_t>(kCoverRound, samples - r * kCoverRound);
    std::vector<double> y(spec.ambient_size());
    double m = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      sample_sphere_into(rng, y);
      m = std::max(m, P.distance(y));
    }
    per[r] = m;
  });
  return *std::max_element(per.begin(), per.end());
}

std::vector<SpherePoint> fiber0_samples(int k, std::size_t count, std::uint64_t seed) {
  const Projector P(EpcSpec::tmc_odd(k));
  Rng rng(seed);
  std::vector<SpherePoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> y(2 * k + 2);
    sample_sphere_into(rng, y);
    to_fiber0(P, y);
    out.push_back(make_unchecked(std::move(y)));
  }
  return out;
}

DistortionEstimate estimate_distortion(const EpcSpec& spec, std::uint64_t budget, std::uint64_t seed,
                                       bool refine, int threads) {
  check_budget(budget);
  const Projector P(spec);
  PhaseResult a = random_phase(P, std::max<std::uint64_t>(1, budget / 4), seed, refine, threads);
  PhaseResult b = boundary_phase(P, budget, seed, threads);
  Best best = a.dis;
  best.merge(b.dis);
  best.merge([&] {
    // near-tie diameters are pairs (x, y), (x', y) of the relation
    Best d;
    if (b.disc.ties.size() >= 2) {
      std::size_t bi = 0, bj = 1;
      double diam = -1;
      for (std::size_t i = 0; i < b.disc.ties.size(); ++i)
        for (std::size_t j = i + 1; j < b.disc.ties.size(); ++j) {
          const double v = spec.domain_distance(b.disc.ties[i], b.disc.ties[j]);
          if (v > diam) {
            diam = v;
            bi = i;
            bj = j;
          }
        }
      d.offer(diam, b.disc.ties[bi], b.disc.y, b.disc.ties[bj], b.disc.y);
    }
    return d;
  }());
  DistortionEstimate est;
  est.value = std::max(0.0, best.value);
  est.witness_a = best.a;
  est.witness_b = best.b;
  est.samples_used = a.projections + b.projections;
  est.refinement_level = a.accepted + b.accepted;
  return est;
}

DiscEstimate disc_estimate_full(const EpcSpec& spec, std::uint64_t budget, std::uint64_t seed, int threads) {
  check_budget(budget);
  const Projector P(spec);
  PhaseResult b = boundary_phase(P, budget, seed, threads);
  DiscEstimate out;
  out.value = std::max(0.0, b.disc.value);
  out.y = b.disc.y;
  out.tie_params = b.disc.ties;
  out.samples_used = b.projections;
  return out;
}

double disc_estimate(const EpcSpec& spec, std::uint64_t budget, std::uint64_t seed, int threads) {
  return disc_estimate_full(spec, budget, seed, threads).value;
}

double dis_gamma(int k, double* argmax) {
  if (k < 1 || k > 8) throw DomainError("dis_gamma supports 1 <= k <= 8");
  auto f = [k](double t) { return std::abs(std::acos(clamp_unit(h_closed(k, t))) - t); };
  constexpr int n = 1 << 17;
  const double h = kPi / n;
  double bv = -1.0, bt = 0.0;
  for (int i = 1; i < n; ++i) {
    const double t = i * h;
    const double v = f(t);
    if (v > bv) {
      bv = v;
      bt = t;
    }
  }
  auto [t, v] = detail::golden_max(f, std::max(1e-15, bt - h), std::min(kPi, bt + h), 1e-12);
  if (v < bv) {
    t = bt;
    v = bv;
  }
  if (argmax) *argmax = t;
  return v;
}

double dis_gamma(int k) { return dis_gamma(k, nullptr); }

double pair_distortion(const EpcSpec& spec, const CorrElement& a, const CorrElement& b) {
  if (a.y.size() != spec.ambient_size() || b.y.size() != spec.ambient_size())
    throw DimensionError("correspondence element does not live on the spec's ambient sphere");
  return std::abs(spec.domain_distance(a.x, b.x) - gdist(a.y, b.y));
}

double relation_distortion(const EpcSpec& spec, const std::vector<CorrElement>& elements) {
  double m = 0.0;
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (std::size_t j = i + 1; j < elements.size(); ++j)
      m = std::max(m, pair_distortion(spec, elements[i], elements[j]));
  return m;
}

}  // namespace epcgh
