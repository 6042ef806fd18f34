#include "twistor/taming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <tuple>

#include <boost/math/tools/minima.hpp>

#include "twistor/errors.hpp"

namespace twistor {

std::string to_string(TamingClass c) {
  switch (c) {
    case TamingClass::TamedJPlus: return "TamedJPlus";
    case TamingClass::TamedJMinus: return "TamedJMinus";
    case TamingClass::NotTamed: return "NotTamed";
  }
  return "NotTamed";
}

std::string to_string(RegionClass c) {
  switch (c) {
    case RegionClass::TamedJPlus: return "tamed-J+";
    case RegionClass::TamedJMinus: return "tamed-J-";
    case RegionClass::Mixed: return "mixed";
    case RegionClass::Untamed: return "untamed";
  }
  return "untamed";
}

std::vector<Vec3> fibonacci_sphere(int n) {
  if (n < 1) throw ArgumentError("fibonacci_sphere: n must be positive");
  std::vector<Vec3> pts(n);
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    pts[i] = Vec3(r * std::cos(phi), r * std::sin(phi), z);
  }
  return pts;
}

namespace {

double margin_at(const Mat3& A, const Mat3& B, const Vec3& t) {
  return std::abs(t.dot(A * t)) - (B * t).norm();
}

// Riemannian Newton on the smooth branch s <A t, t> - |B t| inside
// s <A t, t> >= 0, with a gradient step wherever the Hessian is not
// positive definite.
Vec3 smooth_newton(const Mat3& A, const Mat3& B, double s, Vec3 t) {
  const Mat3 M = B.transpose() * B;
  auto f = [&](const Vec3& x) { return s * x.dot(A * x) - (B * x).norm(); };
  double val = f(t);
  for (int it = 0; it < 100; ++it) {
    const Vec3 bt = B * t;
    const double nb = bt.norm();
    if (nb < 1e-14) break;
    const Vec3 btb = B.transpose() * bt;
    const Vec3 egrad = 2.0 * s * (A * t) - btb / nb;
    const Mat3 ehess = 2.0 * s * A - M / nb + btb * btb.transpose() / (nb * nb * nb);
    Eigen::Matrix<double, 3, 2> U;
    U.col(0) = t.unitOrthogonal();
    U.col(1) = t.cross(U.col(0));
    const Vec2 g = U.transpose() * egrad;
    if (g.norm() < 1e-14) break;
    const Eigen::Matrix2d H = U.transpose() * ehess * U - t.dot(egrad) * Eigen::Matrix2d::Identity();
    Vec2 d = -g;
    const Eigen::LLT<Eigen::Matrix2d> llt(H);
    if (llt.info() == Eigen::Success) d = -llt.solve(g);
    if (d.norm() > 0.5) d *= 0.5 / d.norm();
    bool improved = false;
    for (double a = 1.0; a > 1e-12; a *= 0.5) {
      const Vec3 tn = (t + a * (U * d)).normalized();
      const double vn = f(tn);
      if (s * tn.dot(A * tn) >= 0.0 && vn < val) {
        t = tn;
        val = vn;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return t;
}

// Global minimum of -|B t| on the curve <A t, t> = 0. In the eigenbasis
// the curve is t = (rho cos phi, rho sin phi, z) up to ordering, with
// w(phi) rho^2 = c z^2; antipodal points give equal values, so z >= 0.
std::optional<Vec3> kink_minimum(const Mat3& A, const Mat3& B) {
  const Eigen::SelfAdjointEigenSolver<Mat3> es(A);
  const Vec3 lam = es.eigenvalues();
  if (!(lam(0) < 0.0 && lam(2) > 0.0)) return std::nullopt;
  const Mat3& V = es.eigenvectors();
  int k, i, j;
  double li, lj, c;
  if (lam(1) >= 0.0) {
    k = 0, i = 1, j = 2, li = lam(1), lj = lam(2), c = -lam(0);
  } else {
    k = 2, i = 0, j = 1, li = -lam(0), lj = -lam(1), c = lam(2);
  }
  auto point = [&](double phi) {
    const double cp = std::cos(phi), sp = std::sin(phi);
    const double w = li * cp * cp + lj * sp * sp;
    const double rho = std::sqrt(c / (w + c)), z = std::sqrt(w / (w + c));
    return Vec3(rho * cp * V.col(i) + rho * sp * V.col(j) + z * V.col(k));
  };
  auto h = [&](double phi) { return -(B * point(phi)).norm(); };
  constexpr int n = 720;
  const double step = 2.0 * M_PI / n;
  std::vector<double> vals(n);
  for (int m = 0; m < n; ++m) vals[m] = h(m * step);
  double best_phi = 0.0, best = std::numeric_limits<double>::infinity();
  for (int m = 0; m < n; ++m) {
    if (vals[m] > vals[(m + n - 1) % n] || vals[m] > vals[(m + 1) % n]) continue;
    const auto [phi, v] =
        boost::math::tools::brent_find_minima(h, (m - 1) * step, (m + 1) * step, 52);
    if (v < best) {
      best = v;
      best_phi = phi;
    }
  }
  Vec3 t = point(best_phi);
  // Snap exactly onto the curve.
  for (int it = 0; it < 3; ++it) {
    const double q = t.dot(A * t);
    Vec3 g = 2.0 * (A * t);
    g -= g.dot(t) * t;
    const double gg = g.squaredNorm();
    if (gg < 1e-24) break;
    t = (t - (q / gg) * g).normalized();
  }
  return t;
}

}  // namespace

MarginResult taming_margin_dense(const Mat3& A, const Mat3& B, int n_points) {
  const auto pts = fibonacci_sphere(n_points);
  MarginResult r;
  r.margin = std::numeric_limits<double>::infinity();
  for (const Vec3& t : pts) {
    const double m = margin_at(A, B, t);
    if (m < r.margin) {
      r.margin = m;
      r.argmin = t;
    }
  }
  return r;
}

MarginResult taming_margin(const Mat3& A, const Mat3& B) {
  static const std::vector<Vec3> lattice = fibonacci_sphere(2048);
  std::vector<double> vals(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) vals[i] = margin_at(A, B, lattice[i]);
  std::vector<std::size_t> order(lattice.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + 8, order.end(),
                    [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
  MarginResult best;
  best.margin = vals[order[0]];
  best.argmin = lattice[order[0]];
  auto consider = [&](const Vec3& t) {
    const double v = margin_at(A, B, t);
    if (v < best.margin) {
      best.margin = v;
      best.argmin = t;
    }
  };
  for (int s = 0; s < 8; ++s) {
    const Vec3& seed = lattice[order[s]];
    consider(smooth_newton(A, B, seed.dot(A * seed) >= 0.0 ? 1.0 : -1.0, seed));
  }
  if (const auto kink = kink_minimum(A, B)) consider(*kink);
  // Canonical sign for reproducibility.
  int k = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(best.argmin(i)) > std::abs(best.argmin(k))) k = i;
  }
  if (best.argmin(k) < 0.0) best.argmin = -best.argmin;
  return best;
}

TamingVerdict classify(const CurvatureBlocks& b) {
  TamingVerdict v;
  const MarginResult m = taming_margin(b.A, b.B);
  v.margin = m.margin;
  v.argmin_theta = m.argmin;
  v.detA = b.A.determinant();
  v.degenerate = std::abs(v.margin) <= kTamingDeadZone;
  if (v.margin > kTamingDeadZone && v.detA > 0.0) {
    v.cls = TamingClass::TamedJPlus;
  } else if (v.margin > kTamingDeadZone && v.detA < 0.0) {
    v.cls = TamingClass::TamedJMinus;
  } else {
    v.cls = TamingClass::NotTamed;
  }
  return v;
}

PinchingVerdict pinching_verdict(const CurvatureBlocks& b, int n_planes) {
  PinchingVerdict p;
  std::tie(p.kmin, p.kmax) = sectional_range(b, n_planes);
  const bool pos = p.kmin > 0.0 && p.kmax > 0.0;
  const bool neg = p.kmin < 0.0 && p.kmax < 0.0;
  if (pos) {
    p.ratio = p.kmin / p.kmax;
  } else if (neg) {
    p.ratio = p.kmax / p.kmin;
  } else {
    p.ratio = -std::numeric_limits<double>::infinity();
  }
  p.two_fifths_pinched = (pos || neg) && p.ratio > 0.4;
  return p;
}

PinchingVerdict pinching_verdict(const MetricChart& chart, const Point& x, int n_planes) {
  return pinching_verdict(curvature_blocks(chart, x), n_planes);
}

std::vector<Point> grid_points(const GridSpec& spec) {
  if (spec.n < 1) throw ArgumentError("grid: n must be positive");
  std::vector<double> ticks(spec.n);
  for (int k = 0; k < spec.n; ++k) {
    ticks[k] = spec.n == 1 ? 0.0 : spec.half_width * (-1.0 + 2.0 * k / (spec.n - 1));
  }
  std::vector<Point> out;
  for (int i0 = 0; i0 < spec.n; ++i0)
    for (int i1 = 0; i1 < spec.n; ++i1)
      for (int i2 = 0; i2 < spec.n; ++i2)
        for (int i3 = 0; i3 < spec.n; ++i3) {
          const Point d{ticks[i0], ticks[i1], ticks[i2], ticks[i3]};
          const double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3]);
          if (r < spec.r_min) continue;
          if (spec.r_max > 0.0 && r >= spec.r_max) continue;
          out.push_back({spec.center[0] + d[0], spec.center[1] + d[1],
                         spec.center[2] + d[2], spec.center[3] + d[3]});
        }
  return out;
}

namespace {

PointVerdict scan_point(const MetricChart& chart, const Point& x) {
  PointVerdict pv;
  pv.x = x;
  try {
    if (!chart.domain.admissible(x)) {
      throw DomainError("point outside admissible region of '" + chart.name + "'");
    }
    pv.verdict = classify(curvature_blocks(chart, x));
  } catch (const std::exception& e) {
    pv.error = e.what();
  }
  return pv;
}

RegionReport summarize(std::vector<PointVerdict> pts) {
  RegionReport r;
  r.points = std::move(pts);
  r.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& p : r.points) {
    if (!p.verdict) {
      ++r.n_errors;
      continue;
    }
    switch (p.verdict->cls) {
      case TamingClass::TamedJPlus: ++r.n_plus; break;
      case TamingClass::TamedJMinus: ++r.n_minus; break;
      case TamingClass::NotTamed: ++r.n_not; break;
    }
    if (p.verdict->margin < r.min_margin) {
      r.min_margin = p.verdict->margin;
      r.min_point = p.x;
    }
  }
  const std::size_t ok = r.n_plus + r.n_minus + r.n_not;
  if (ok == 0) {
    r.region = RegionClass::Untamed;
    r.min_margin = std::numeric_limits<double>::quiet_NaN();
  } else if (r.n_plus == ok) {
    r.region = RegionClass::TamedJPlus;
  } else if (r.n_minus == ok) {
    r.region = RegionClass::TamedJMinus;
  } else if (r.n_not == ok) {
    r.region = RegionClass::Untamed;
  } else {
    r.region = RegionClass::Mixed;
  }
  return r;
}

}  // namespace

RegionReport region_scan_serial(const MetricChart& chart, const std::vector<Point>& pts) {
  std::vector<PointVerdict> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) out[i] = scan_point(chart, pts[i]);
  return summarize(std::move(out));
}

RegionReport region_scan(const MetricChart& chart, const std::vector<Point>& pts) {
  std::vector<PointVerdict> out(pts.size());
  const long n = static_cast<long>(pts.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i) out[i] = scan_point(chart, pts[i]);
  return summarize(std::move(out));
}

}  // namespace twistor
