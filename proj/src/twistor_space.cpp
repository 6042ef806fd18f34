#include "twistor/twistor_space.hpp"

#include <cmath>

#include "twistor/errors.hpp"
#include "twistor/quadrature.hpp"

namespace twistor {

FibreChartFrame fibre_chart_frame(FibreChart chart) {
  switch (chart) {
    case FibreChart::North: return {Vec3::UnitZ(), Vec3::UnitX(), Vec3::UnitY()};
    case FibreChart::South: return {-Vec3::UnitZ(), Vec3::UnitY(), Vec3::UnitX()};
    case FibreChart::Equatorial: return {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  }
  return {Vec3::UnitZ(), Vec3::UnitX(), Vec3::UnitY()};
}

Vec3 theta_from_zeta(FibreChart chart, const Vec2& z) {
  const FibreChartFrame f = fibre_chart_frame(chart);
  const double r2 = z.squaredNorm();
  return ((1.0 - r2) * f.c + 2.0 * z(0) * f.b1 + 2.0 * z(1) * f.b2) / (1.0 + r2);
}

Vec2 zeta_from_theta(FibreChart chart, const Vec3& theta) {
  const FibreChartFrame f = fibre_chart_frame(chart);
  const double d = 1.0 + theta.dot(f.c);
  if (d < 1e-12) throw ArgumentError("zeta_from_theta: point at the chart pole");
  return Vec2(theta.dot(f.b1) / d, theta.dot(f.b2) / d);
}

Mat32 dtheta_dzeta(FibreChart chart, const Vec2& z) {
  const FibreChartFrame f = fibre_chart_frame(chart);
  const double d = 1.0 + z.squaredNorm();
  const Vec3 th = theta_from_zeta(chart, z);
  Mat32 m;
  m.col(0) = (2.0 * f.b1 - 2.0 * z(0) * f.c - 2.0 * z(0) * th) / d;
  m.col(1) = (2.0 * f.b2 - 2.0 * z(1) * f.c - 2.0 * z(1) * th) / d;
  return m;
}

namespace {

void require_unit(const Vec3& theta, const char* where) {
  if (!theta.allFinite() || std::abs(theta.norm() - 1.0) > 1e-9) {
    throw ArgumentError(std::string(where) + ": theta must be a unit vector");
  }
}

Point head4(const Vec6& y) { return {y(0), y(1), y(2), y(3)}; }

Vec6 coords_of(const TwistorPoint& p) {
  Vec6 y;
  y << p.x[0], p.x[1], p.x[2], p.x[3], p.zeta(0), p.zeta(1);
  return y;
}

TwistorPoint point_from_coords(FibreChart chart, const Vec6& y) {
  return twistor_point_at(head4(y), chart, Vec2(y(4), y(5)));
}

Mat4 antisym_form(const Vec3& theta) { return self_dual_form(theta); }

// Everything needed to evaluate the twistor structures at one point.
struct Local {
  PointGeometry pg;
  TwistorPoint p;
  TwistorTangentFrame fr;
  std::array<Mat3, 6> curv;  // lambda_plus_curvature on pairs c < d
};

int pair_index(int c, int d) {
  static const int idx[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return idx[c][d];
}

Local make_local(const MetricChart& chart, const TwistorPoint& p) {
  Local l{point_geometry(chart, p.x), p, {}, {}};
  l.fr = twistor_frame(l.pg, p);
  for (int c = 0; c < 4; ++c)
    for (int d = c + 1; d < 4; ++d) l.curv[pair_index(c, d)] = lambda_plus_curvature(l.pg, c, d);
  return l;
}

Mat3 curvature_on(const Local& l, const Vec4& u, const Vec4& v) {
  const Vec4 uc = l.pg.frame.coframe * u, vc = l.pg.frame.coframe * v;
  Mat3 f = Mat3::Zero();
  for (int c = 0; c < 4; ++c)
    for (int d = c + 1; d < 4; ++d) {
      const double w = uc(c) * vc(d) - uc(d) * vc(c);
      if (w != 0.0) f += w * l.curv[pair_index(c, d)];
    }
  return f;
}

// Covariant derivative of the tautological section along a coordinate
// tangent vector.
Vec3 d_theta(const Local& l, const Vec6& u) {
  const Mat32 m = dtheta_dzeta(l.p.chart, l.p.zeta);
  Mat3 a = Mat3::Zero();
  for (int k = 0; k < 4; ++k) a += u(k) * l.fr.connection_form[k];
  return m * u.tail<2>() + a * l.p.theta;
}

double omega_local(const Local& l, const Vec6& u, const Vec6& v) {
  const Vec3& th = l.p.theta;
  const Mat3 P = Mat3::Identity() - th * th.transpose();
  const Vec3 du = d_theta(l, u), dv = d_theta(l, v);
  const Mat3 dpu = -(du * th.transpose() + th * du.transpose());
  const Mat3 dpv = -(dv * th.transpose() + th * dv.transpose());
  const Mat3 fe = curvature_on(l, u.head<4>(), v.head<4>());
  const Mat3 fv = P * fe * P + P * (dpu * dpv - dpv * dpu) * P;
  return l.fr.f1.dot(fv * l.fr.f2);
}

Mat6 omega_matrix(const Local& l) {
  Mat6 om = Mat6::Zero();
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      const double w = omega_local(l, Vec6::Unit(i), Vec6::Unit(j));
      om(i, j) = w;
      om(j, i) = -w;
    }
  return om;
}

Mat6 acs_local(const Local& l, int sign) {
  return l.fr.basis * twistor_acs_frame(l.p.theta, sign) * l.fr.basis.inverse();
}

template <typename F>
auto richardson_derivative(F&& f, const Vec6& y, int dir, double h) {
  auto central = [&](double s) {
    Vec6 yp = y, ym = y;
    yp(dir) += s;
    ym(dir) -= s;
    return ((f(yp) - f(ym)) / (2.0 * s)).eval();
  };
  const auto coarse = central(h);
  const auto fine = central(0.5 * h);
  return ((4.0 * fine - coarse) / 3.0).eval();
}

}  // namespace

TwistorPoint make_twistor_point(const Point& x, const Vec3& theta) {
  require_unit(theta, "make_twistor_point");
  TwistorPoint p;
  p.x = x;
  p.theta = theta;
  p.chart = theta(2) >= 0.0 ? FibreChart::North : FibreChart::South;
  p.zeta = zeta_from_theta(p.chart, theta);
  return p;
}

TwistorPoint twistor_point_at(const Point& x, FibreChart chart, const Vec2& zeta) {
  TwistorPoint p;
  p.x = x;
  p.chart = chart;
  p.zeta = zeta;
  p.theta = theta_from_zeta(chart, zeta);
  return p;
}

Mat4 fibre_to_acs(const Vec3& theta) {
  require_unit(theta, "fibre_to_acs");
  return std::sqrt(2.0) * antisym_form(theta).transpose();
}

Mat4 fibre_to_acs(const Vec3& theta, const OrthoFrame& frame) {
  return frame.frame * fibre_to_acs(theta) * frame.coframe;
}

std::array<Mat3, 4> lambda_plus_connection(const PointGeometry& pg) {
  std::array<Mat3, 4> alpha;
  for (int k = 0; k < 4; ++k) {
    const Mat4& g = pg.conn[k];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const Mat4 s = sigma_plus(j);
        alpha[k](i, j) = form_inner(sigma_plus(i), g * s - s * g);
      }
  }
  return alpha;
}

Mat3 lambda_plus_curvature(const PointGeometry& pg, int c, int d) {
  Mat4 r;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) r(a, b) = pg.riemann(a, b, c, d);
  Mat3 f;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Mat4 s = sigma_plus(j);
      f(i, j) = form_inner(sigma_plus(i), r * s - s * r);
    }
  return f;
}

Mat3 lambda_plus_curvature(const PointGeometry& pg, const Vec4& u, const Vec4& v) {
  const Vec4 uc = pg.frame.coframe * u, vc = pg.frame.coframe * v;
  Mat3 f = Mat3::Zero();
  for (int c = 0; c < 4; ++c)
    for (int d = c + 1; d < 4; ++d) {
      const double w = uc(c) * vc(d) - uc(d) * vc(c);
      if (w != 0.0) f += w * lambda_plus_curvature(pg, c, d);
    }
  return f;
}

TwistorTangentFrame twistor_frame(const PointGeometry& pg, const TwistorPoint& p) {
  TwistorTangentFrame fr;
  fr.connection_form = lambda_plus_connection(pg);
  const Mat32 m = dtheta_dzeta(p.chart, p.zeta);
  fr.lambda = 2.0 / (1.0 + p.zeta.squaredNorm());
  const double l2 = fr.lambda * fr.lambda;
  std::array<Vec6, 4> lift;
  for (int k = 0; k < 4; ++k) {
    const Vec2 dz = -m.transpose() * (fr.connection_form[k] * p.theta) / l2;
    lift[k] = Vec6::Zero();
    lift[k](k) = 1.0;
    lift[k].tail<2>() = dz;
  }
  for (int a = 0; a < 4; ++a) {
    fr.horizontal[a] = Vec6::Zero();
    for (int k = 0; k < 4; ++k) fr.horizontal[a] += pg.frame.frame(k, a) * lift[k];
    fr.basis.col(a) = fr.horizontal[a];
  }
  for (int v = 0; v < 2; ++v) {
    fr.vertical[v] = Vec6::Zero();
    fr.vertical[v](4 + v) = 1.0 / fr.lambda;
    fr.basis.col(4 + v) = fr.vertical[v];
  }
  fr.f1 = m.col(0) / fr.lambda;
  fr.f2 = m.col(1) / fr.lambda;
  return fr;
}

TwistorTangentFrame twistor_frame(const MetricChart& chart, const TwistorPoint& p) {
  return twistor_frame(point_geometry(chart, p.x), p);
}

Mat6 twistor_acs_frame(const Vec3& theta, int sign) {
  if (sign != 1 && sign != -1) throw ArgumentError("twistor_acs: sign must be +1 or -1");
  Mat6 j = Mat6::Zero();
  j.topLeftCorner<4, 4>() = sign * fibre_to_acs(theta);
  j(5, 4) = 1.0;
  j(4, 5) = -1.0;
  return j;
}

Mat6 twistor_acs(const MetricChart& chart, const TwistorPoint& p, int sign) {
  return acs_local(make_local(chart, p), sign);
}

Mat6 reznikov_matrix(const MetricChart& chart, const TwistorPoint& p) {
  return omega_matrix(make_local(chart, p));
}

double reznikov_form(const MetricChart& chart, const TwistorPoint& p, const Vec6& u,
                     const Vec6& v) {
  return omega_local(make_local(chart, p), u, v);
}

double fibre_integral(const MetricChart& chart, const Point& x, int n_radial,
                      int n_angular) {
  if (n_radial < 1 || n_angular < 1) throw ArgumentError("fibre_integral: bad rule size");
  const QuadratureRule rr = gauss_legendre(n_radial, 0.0, 1.0);
  const PointGeometry pg = point_geometry(chart, x);
  double total = 0.0;
  for (FibreChart fc : {FibreChart::North, FibreChart::South}) {
    for (int i = 0; i < n_radial; ++i) {
      const double r = rr.nodes[i];
      for (int k = 0; k < n_angular; ++k) {
        const double phi = 2.0 * M_PI * (k + 0.5) / n_angular;
        const TwistorPoint p = twistor_point_at(x, fc, Vec2(r * std::cos(phi), r * std::sin(phi)));
        Local l{pg, p, twistor_frame(pg, p), {}};
        for (int c = 0; c < 4; ++c)
          for (int d = c + 1; d < 4; ++d) l.curv[pair_index(c, d)] = lambda_plus_curvature(pg, c, d);
        const double w = omega_local(l, Vec6::Unit(4), Vec6::Unit(5));
        total += rr.weights[i] * (2.0 * M_PI / n_angular) * r * w;
      }
    }
  }
  if (!std::isfinite(total)) throw EvaluationError("fibre_integral: non-finite quadrature");
  return total;
}

double d_omega_check(const MetricChart& chart, const TwistorPoint& p, double h) {
  if (!(h > 0.0)) throw ArgumentError("d_omega_check: step must be positive");
  const Vec6 y = coords_of(p);
  auto om = [&](const Vec6& q) { return omega_matrix(make_local(chart, point_from_coords(p.chart, q))); };
  std::array<Mat6, 6> d;
  for (int l = 0; l < 6; ++l) d[l] = richardson_derivative(om, y, l, h);
  double worst = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      for (int k = j + 1; k < 6; ++k) {
        const double v = d[i](j, k) + d[j](k, i) + d[k](i, j);
        worst = std::max(worst, std::abs(v));
      }
  return worst;
}

double nijenhuis(const MetricChart& chart, const TwistorPoint& p, int sign, double h) {
  if (!(h > 0.0)) throw ArgumentError("nijenhuis: step must be positive");
  const Vec6 y = coords_of(p);
  auto jf = [&](const Vec6& q) { return acs_local(make_local(chart, point_from_coords(p.chart, q)), sign); };
  const Local l0 = make_local(chart, p);
  const Mat6 J = acs_local(l0, sign);
  std::array<Mat6, 6> dj;
  for (int l = 0; l < 6; ++l) dj[l] = richardson_derivative(jf, y, l, h);
  // n[i][j](k) = N(d_i, d_j)^k
  std::array<std::array<Vec6, 6>, 6> n;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      Vec6 v = Vec6::Zero();
      for (int l = 0; l < 6; ++l) {
        v += J(l, i) * dj[l].col(j) - J(l, j) * dj[l].col(i);
      }
      v -= J * (dj[i].col(j) - dj[j].col(i));
      n[i][j] = v;
    }
  const Mat6& T = l0.fr.basis;
  const Mat6 Tinv = T.inverse();
  double worst = 0.0;
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) {
      Vec6 v = Vec6::Zero();
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) v += T(i, a) * T(j, b) * n[i][j];
      worst = std::max(worst, (Tinv * v).cwiseAbs().maxCoeff());
    }
  return worst;
}

double holonomy_form(const MetricChart& chart, const TwistorPoint& p, const Vec6& u,
                     const Vec6& v, double s, int steps) {
  if (!(s > 0.0) || steps < 1) throw ArgumentError("holonomy_form: bad loop parameters");
  const FibreChart fc = p.chart;
  const Vec6 start = coords_of(p) - 0.5 * s * (u + v);
  // Transport ODE for w in theta-perp along y(t) with velocity ydot.
  auto rhs = [&](const Vec6& y, const Vec6& ydot, const Vec3& w) {
    const PointGeometry pg = point_geometry(chart, head4(y));
    const auto alpha = lambda_plus_connection(pg);
    Mat3 a = Mat3::Zero();
    for (int k = 0; k < 4; ++k) a += ydot(k) * alpha[k];
    const Vec2 z(y(4), y(5));
    const Vec3 th = theta_from_zeta(fc, z);
    const Vec3 th_dot = dtheta_dzeta(fc, z) * ydot.tail<2>();
    const Vec3 aw = a * w;
    const double c = aw.dot(th) - w.dot(th_dot);
    return (-aw + c * th).eval();
  };
  auto transport = [&](Vec3 w) {
    Vec6 y = start;
    const std::array<Vec6, 4> legs = {u, v, -u, -v};
    for (const Vec6& leg : legs) {
      const Vec6 vel = s * leg;
      const double dt = 1.0 / steps;
      for (int k = 0; k < steps; ++k) {
        const Vec3 k1 = rhs(y, vel, w);
        const Vec3 k2 = rhs(y + 0.5 * dt * vel, vel, w + 0.5 * dt * k1);
        const Vec3 k3 = rhs(y + 0.5 * dt * vel, vel, w + 0.5 * dt * k2);
        const Vec3 k4 = rhs(y + dt * vel, vel, w + dt * k3);
        w += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        y += dt * vel;
      }
    }
    return w;
  };
  const TwistorPoint p0 = point_from_coords(fc, start);
  const Mat32 m = dtheta_dzeta(fc, p0.zeta);
  const double lam = 2.0 / (1.0 + p0.zeta.squaredNorm());
  const Vec3 f1 = m.col(0) / lam, f2 = m.col(1) / lam;
  // hol = I - s^2 F(U, W) + O(s^3); read off <F f2, f1>.
  const Vec3 h2 = transport(f2);
  return -(f1.dot(h2) - f1.dot(f2)) / (s * s);
}

ComparisonResult comparison_map(const MetricChart& g, const MetricChart& g_prime,
                                const Point& x, const Vec3& theta) {
  require_unit(theta, "comparison_map");
  const OrthoFrame f = ortho_frame(metric_values(metric_jet(g, x)), g.orientation);
  const OrthoFrame fp = ortho_frame(metric_values(metric_jet(g_prime, x)), g_prime.orientation);
  const Mat4 to_prime = f.coframe * fp.frame;  // e E'
  Mat3 L;
  for (int j = 0; j < 3; ++j) {
    const Mat4 img = to_prime.transpose() * sigma_plus(j) * to_prime;
    L.col(j) = self_dual_part(img);
  }
  Eigen::JacobiSVD<Mat3> svd(L);
  const auto sv = svd.singularValues();
  if (!(sv(2) > 1e-3 * sv(0))) {
    throw ComparisonError("comparison_map: projection onto Lambda+ of g' degenerates");
  }
  const Vec3 psi = L * theta;
  ComparisonResult r;
  r.stretch = psi.norm();
  r.theta = psi / r.stretch;
  r.dtheta = (Mat3::Identity() - r.theta * r.theta.transpose()) * L / r.stretch;
  return r;
}

namespace {

Vec6 psi_coords(const MetricChart& g, const MetricChart& gp, FibreChart fc, const Vec6& y) {
  const Point x = head4(y);
  const Vec3 th = theta_from_zeta(fc, Vec2(y(4), y(5)));
  const Vec3 thp = comparison_map(g, gp, x, th).theta;
  Vec6 out = y;
  out.tail<2>() = zeta_from_theta(fc, thp);
  return out;
}

}  // namespace

Mat6 pulled_back_acs(const MetricChart& g, const MetricChart& g_prime,
                     const TwistorPoint& p, int sign, double h) {
  const Vec6 y = coords_of(p);
  Mat6 dpsi;
  for (int l = 0; l < 6; ++l) {
    Vec6 yp = y, ym = y;
    yp(l) += h;
    ym(l) -= h;
    dpsi.col(l) = (psi_coords(g, g_prime, p.chart, yp) - psi_coords(g, g_prime, p.chart, ym)) / (2.0 * h);
  }
  const Vec6 q = psi_coords(g, g_prime, p.chart, y);
  const Mat6 jp = twistor_acs(g_prime, point_from_coords(p.chart, q), sign);
  return dpsi.inverse() * jp * dpsi;
}

double acs_c1_distance(const MetricChart& g, const MetricChart& g_prime,
                       const std::vector<TwistorPoint>& samples, int sign, double h) {
  double c0 = 0.0, c1 = 0.0;
  for (const TwistorPoint& p : samples) {
    auto diff = [&](const Vec6& y) {
      const TwistorPoint q = point_from_coords(p.chart, y);
      return (pulled_back_acs(g, g_prime, q, sign) - twistor_acs(g, q, sign)).eval();
    };
    const Vec6 y = coords_of(p);
    c0 = std::max(c0, diff(y).cwiseAbs().maxCoeff());
    for (int l = 0; l < 6; ++l) {
      Vec6 yp = y, ym = y;
      yp(l) += h;
      ym(l) -= h;
      c1 = std::max(c1, ((diff(yp) - diff(ym)) / (2.0 * h)).cwiseAbs().maxCoeff());
    }
  }
  return c0 + c1;
}

}  // namespace twistor
