#include "twistor/sphere_map.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/jacobi.hpp>

#include "twistor/errors.hpp"
#include "twistor/quadrature.hpp"

namespace twistor {

namespace {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kFjStep = 1e-4;     // central difference in xi
constexpr double kJetStep = 1e-5;    // derivative of exp along the domain

struct ZernikeIndex {
  int n, m;
  bool sine;
};

std::vector<ZernikeIndex> zernike_indices(int L) {
  std::vector<ZernikeIndex> idx;
  for (int n = 0; n <= L; ++n) {
    for (int m = n; m >= 0; m -= 2) {
      idx.push_back({n, m, false});
      if (m > 0) idx.push_back({n, m, true});
    }
  }
  return idx;
}

int basis_count(int L) { return (L + 1) * (L + 2) / 2; }

Vec6 row6(const MatX& m, int i) { return m.row(i).transpose(); }

bool finite(const Vec6& v) { return v.allFinite(); }

Vec6 geodesic_accel(const std::array<Mat6, 6>& gamma, const Vec6& v) {
  Vec6 a;
  for (int k = 0; k < 6; ++k) a(k) = -v.dot(gamma[k] * v);
  return a;
}

Vec6 transport_rate(const std::array<Mat6, 6>& gamma, const Vec6& v, const Vec6& w) {
  Vec6 a;
  for (int k = 0; k < 6; ++k) a(k) = -v.dot(gamma[k] * w);
  return a;
}

struct GeoState {
  Vec6 x, v, w;
};

// RK4 on (x, v, w) over unit time.
GeoState integrate(const TargetModel& target, int chart, GeoState s, int steps) {
  const double h = 1.0 / steps;
  auto rate = [&](const GeoState& q) {
    const auto gamma = target.christoffel(chart, q.x);
    return GeoState{q.v, geodesic_accel(gamma, q.v), transport_rate(gamma, q.v, q.w)};
  };
  auto add = [](const GeoState& a, const GeoState& b, double c) {
    return GeoState{a.x + c * b.x, a.v + c * b.v, a.w + c * b.w};
  };
  for (int i = 0; i < steps; ++i) {
    const GeoState k1 = rate(s);
    const GeoState k2 = rate(add(s, k1, 0.5 * h));
    const GeoState k3 = rate(add(s, k2, 0.5 * h));
    const GeoState k4 = rate(add(s, k3, h));
    s.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    s.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    s.w += h / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
    if (!finite(s.x) || !finite(s.v) || !finite(s.w)) {
      throw TransportError("geodesic integration produced non-finite values");
    }
  }
  return s;
}

// Calls f(pair, point, first_row) for every seam collocation point.
template <class F>
void for_each_seam(const SphereGrid& g, F&& f) {
  int row = 12 * g.test_size();
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < static_cast<int>(g.seam_angles[j].size()); ++k, row += 2) f(j, k, row);
  }
}

struct LocalMaps {
  std::array<std::vector<Mat6>, 2> m, j;
};

LocalMaps local_maps(const DiscretizedSphereMap& u, const TargetModel& target, int steps,
                     bool parallel) {
  const SphereGrid& g = *u.grid;
  const NodeValues nv = node_values(u);
  const int nodes = g.node_count();
  LocalMaps lm;
  for (int c = 0; c < 2; ++c) {
    lm.m[c].resize(nodes);
    lm.j[c].resize(nodes);
  }
  std::exception_ptr error;
  const Vec6 zero = Vec6::Zero();
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (int task = 0; task < 2 * nodes; ++task) {
    const int c = task / nodes, n = task % nodes;
    try {
      const Vec6 y = row6(nv.u[c], n), ys = row6(nv.us[c], n), yt = row6(nv.ut[c], n);
      Mat6 m;
      for (int k = 0; k < 6; ++k) {
        Vec6 e = Vec6::Zero();
        e(k) = kFjStep;
        m.col(k) = (nodal_fj(target, c, y, ys, yt, e, zero, zero, steps) -
                    nodal_fj(target, c, y, ys, yt, -e, zero, zero, steps)) /
                   (2.0 * kFjStep);
      }
      lm.m[c][n] = m;
      lm.j[c][n] = target.acs(c, y);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return lm;
}

CROperatorMatrix assemble(const DiscretizedSphereMap& u, const TargetModel& target, int steps,
                          bool parallel) {
  const SphereGrid& g = *u.grid;
  const LocalMaps lm = local_maps(u, target, steps, parallel);
  const int P = g.basis_size(), Q = g.test_size(), K = g.seam_count();
  const int nodes = g.node_count();
  CROperatorMatrix op;
  op.basis_size = P;
  op.test_size = Q;
  op.seam_count = K;
  op.matrix = MatX::Zero(g.equations(), g.unknowns());

  const MatX wt_ds = g.weighted_test.transpose() * g.ds;
  VecX mcol(nodes), jcol(nodes);
  for (int c = 0; c < 2; ++c) {
    for (int d = 0; d < 6; ++d) {
      for (int e = 0; e < 6; ++e) {
        for (int n = 0; n < nodes; ++n) {
          mcol(n) = lm.m[c][n](d, e);
          jcol(n) = lm.j[c][n](d, e);
        }
        MatX block = g.weighted_test.transpose() *
                     (mcol.asDiagonal() * g.val + jcol.asDiagonal() * g.dt);
        if (d == e) block += wt_ds;
        op.matrix.block((c * 6 + d) * Q, (c * 6 + e) * P, Q, P) = block;
      }
    }
  }

  for_each_seam(g, [&](int j, int k, int row0) {
    const Vec6 ya = u.coeff[0].transpose() * g.seam_a[j].row(k).transpose();
    const Mat6 dt = target.transition_jacobian(ya);
    for (int i = 0; i < 2; ++i) {
      const int d = 2 * j + i, row = row0 + i;
      for (int e = 0; e < 6; ++e) op.matrix.block(row, e * P, 1, P) += dt(d, e) * g.seam_a[j].row(k);
      op.matrix.block(row, (6 + d) * P, 1, P) -= g.seam_b[j].row(k);
    }
  });
  return op;
}

}  // namespace

void zernike_basis(int L, double s, double t, VecX& val, VecX& ds, VecX& dt) {
  const std::vector<ZernikeIndex> idx = zernike_indices(L);
  const int n_basis = static_cast<int>(idx.size());
  val.resize(n_basis);
  ds.resize(n_basis);
  dt.resize(n_basis);
  const cplx sigma(s, t);
  const double rho = s * s + t * t;
  const double x = 2.0 * rho - 1.0;
  std::vector<cplx> pw(L + 2);
  pw[0] = 1.0;
  for (int i = 1; i <= L + 1; ++i) pw[i] = pw[i - 1] * sigma;
  for (int b = 0; b < n_basis; ++b) {
    const int n = idx[b].n, m = idx[b].m, k = (n - m) / 2;
    const double p = boost::math::jacobi(static_cast<unsigned>(k), 0.0, double(m), x);
    const double dp =
        k == 0 ? 0.0
               : boost::math::jacobi_derivative(static_cast<unsigned>(k), 0.0, double(m), x, 1u);
    const double f_rho = 2.0 * dp;
    const cplx z = p * pw[m];
    const cplx z_sigma = f_rho * std::conj(sigma) * pw[m] + (m > 0 ? p * double(m) * pw[m - 1] : 0.0);
    const cplx z_sigmabar = f_rho * pw[m + 1];
    const cplx z_s = z_sigma + z_sigmabar;
    const cplx z_t = cplx(0.0, 1.0) * (z_sigma - z_sigmabar);
    const double norm = std::sqrt((m == 0 ? 1.0 : 2.0) * (n + 1) / kPi);
    if (idx[b].sine) {
      val(b) = norm * z.imag();
      ds(b) = norm * z_s.imag();
      dt(b) = norm * z_t.imag();
    } else {
      val(b) = norm * z.real();
      ds(b) = norm * z_s.real();
      dt(b) = norm * z_t.real();
    }
  }
}

std::shared_ptr<const SphereGrid> sphere_grid(int N, std::array<int, 3> twist) {
  if (N < 4 || N % 2 != 0) throw ArgumentError("sphere_grid: N must be even and >= 4");
  for (int w : twist) {
    if (std::abs(w) > N / 2) throw ArgumentError("sphere_grid: seam twist exceeds the degree");
  }
  auto g = std::make_shared<SphereGrid>();
  g->N = N;
  g->L = N / 2;
  g->n_radial = g->L + 4;
  g->n_angular = 2 * g->L + 6;
  const int P = basis_count(g->L), Q = basis_count(g->L - 1);
  const QuadratureRule radial = gauss_legendre(g->n_radial, 0.0, 1.0);
  const int nodes = g->n_radial * g->n_angular;
  g->weights.resize(nodes);
  g->val.resize(nodes, P);
  g->ds.resize(nodes, P);
  g->dt.resize(nodes, P);
  VecX v, vs, vt;
  int n = 0;
  for (int i = 0; i < g->n_radial; ++i) {
    const double r = radial.nodes[i];
    for (int j = 0; j < g->n_angular; ++j, ++n) {
      const double phi = 2.0 * kPi * (j + 0.5) / g->n_angular;
      const double s = r * std::cos(phi), t = r * std::sin(phi);
      g->nodes.emplace_back(s, t);
      g->weights(n) = radial.weights[i] * r * 2.0 * kPi / g->n_angular;
      zernike_basis(g->L, s, t, v, vs, vt);
      g->val.row(n) = v.transpose();
      g->ds.row(n) = vs.transpose();
      g->dt.row(n) = vt.transpose();
    }
  }
  g->weighted_test = g->weights.asDiagonal() * g->val.leftCols(Q);

  g->twist = twist;
  for (int j = 0; j < 3; ++j) {
    const int K = 2 * g->L + 1 + twist[j];
    g->seam_a[j].resize(K, P);
    g->seam_b[j].resize(K, P);
    for (int k = 0; k < K; ++k) {
      const double phi = 2.0 * kPi * k / K;
      g->seam_angles[j].push_back(phi);
      zernike_basis(g->L, std::cos(phi), std::sin(phi), v, vs, vt);
      g->seam_a[j].row(k) = v.transpose();
      zernike_basis(g->L, std::cos(phi), -std::sin(phi), v, vs, vt);
      g->seam_b[j].row(k) = v.transpose();
    }
  }
  return g;
}

VecX DiscretizedSphereMap::flat() const {
  const int P = grid->basis_size();
  VecX out(12 * P);
  for (int c = 0; c < 2; ++c)
    for (int d = 0; d < 6; ++d) out.segment((c * 6 + d) * P, P) = coeff[c].col(d);
  return out;
}

void DiscretizedSphereMap::set_flat(const VecX& x) {
  const int P = grid->basis_size();
  if (x.size() != 12 * P) throw ArgumentError("set_flat: wrong coefficient count");
  for (int c = 0; c < 2; ++c) {
    coeff[c].resize(P, 6);
    for (int d = 0; d < 6; ++d) coeff[c].col(d) = x.segment((c * 6 + d) * P, P);
  }
}

Vec6 DiscretizedSphereMap::value_at(int chart, double s, double t) const {
  VecX v, vs, vt;
  zernike_basis(grid->L, s, t, v, vs, vt);
  return coeff.at(chart).transpose() * v;
}

NodeValues node_values(const DiscretizedSphereMap& u) {
  NodeValues nv;
  for (int c = 0; c < 2; ++c) {
    nv.u[c] = u.grid->val * u.coeff[c];
    nv.us[c] = u.grid->ds * u.coeff[c];
    nv.ut[c] = u.grid->dt * u.coeff[c];
  }
  return nv;
}

DiscretizedSphereMap project_map(std::shared_ptr<const SphereGrid> grid,
                                 const std::function<Vec6(int, double, double)>& f,
                                 std::string tag) {
  DiscretizedSphereMap u;
  u.grid = std::move(grid);
  u.homotopy_class_tag = std::move(tag);
  const SphereGrid& g = *u.grid;
  for (int c = 0; c < 2; ++c) {
    MatX values(g.node_count(), 6);
    for (int n = 0; n < g.node_count(); ++n) {
      values.row(n) = f(c, g.nodes[n](0), g.nodes[n](1)).transpose();
    }
    u.coeff[c] = g.val.transpose() * (g.weights.asDiagonal() * values);
  }
  return u;
}

DiscretizedSphereMap with_twist(const DiscretizedSphereMap& u, std::array<int, 3> twist) {
  DiscretizedSphereMap out = u;
  out.grid = sphere_grid(u.grid->N, twist);
  return out;
}

std::array<int, 3> seam_windings(const DiscretizedSphereMap& u, const TargetModel& target) {
  const int samples = 64 * (u.grid->L + 1);
  std::array<double, 3> total{};
  std::array<cplx, 3> prev{};
  for (int k = 0; k <= samples; ++k) {
    const double phi = 2.0 * kPi * k / samples;
    const Mat6 d = target.transition_jacobian(u.value_at(0, std::cos(phi), std::sin(phi)));
    for (int j = 0; j < 3; ++j) {
      const int a = 2 * j, b = 2 * j + 1;
      const cplx z(0.5 * (d(a, a) + d(b, b)), 0.5 * (d(b, a) - d(a, b)));
      if (std::abs(z) < 1e-12) throw ArgumentError("seam_windings: degenerate transition block");
      if (k > 0) total[j] += std::arg(z / prev[j]);
      prev[j] = z;
    }
  }
  std::array<int, 3> w{};
  for (int j = 0; j < 3; ++j) w[j] = static_cast<int>(std::lround(total[j] / (2.0 * kPi)));
  return w;
}

CRResidual cr_residual(const DiscretizedSphereMap& u, const TargetModel& target) {
  const SphereGrid& g = *u.grid;
  const NodeValues nv = node_values(u);
  const int Q = g.test_size();
  CRResidual r;
  r.discrete.resize(g.equations());
  double sum = 0.0;
  for (int c = 0; c < 2; ++c) {
    r.nodal[c].resize(g.node_count(), 6);
    for (int n = 0; n < g.node_count(); ++n) {
      const Vec6 res = row6(nv.us[c], n) + target.acs(c, row6(nv.u[c], n)) * row6(nv.ut[c], n);
      r.nodal[c].row(n) = res.transpose();
      sum += g.weights(n) * res.squaredNorm();
      r.sup = std::max(r.sup, res.cwiseAbs().maxCoeff());
    }
    const MatX gal = g.weighted_test.transpose() * r.nodal[c];
    for (int d = 0; d < 6; ++d) r.discrete.segment((c * 6 + d) * Q, Q) = gal.col(d);
  }
  for_each_seam(g, [&](int j, int k, int row) {
    const Vec6 ya = u.coeff[0].transpose() * g.seam_a[j].row(k).transpose();
    const Vec6 yb = u.coeff[1].transpose() * g.seam_b[j].row(k).transpose();
    r.discrete.segment(row, 2) = (target.transition(ya) - yb).segment(2 * j, 2);
  });
  r.l2 = std::sqrt(sum);
  r.discrete_sup = r.discrete.cwiseAbs().maxCoeff();
  return r;
}

Vec6 target_exp(const TargetModel& target, int chart, const Vec6& y, const Vec6& xi,
                int steps) {
  if (xi.isZero(0.0)) return y;
  return integrate(target, chart, {y, xi, Vec6::Zero()}, steps).x;
}

Vec6 transport_back(const TargetModel& target, int chart, const Vec6& y, const Vec6& xi,
                    const Vec6& w, int steps) {
  if (xi.isZero(0.0)) return w;
  const GeoState end = integrate(target, chart, {y, xi, Vec6::Zero()}, steps);
  return integrate(target, chart, {end.x, -end.v, w}, steps).w;
}

Vec6 nodal_fj(const TargetModel& target, int chart, const Vec6& u, const Vec6& us,
              const Vec6& ut, const Vec6& xi, const Vec6& xis, const Vec6& xit, int steps) {
  if (xi.isZero(0.0)) {
    const Vec6 vs = us + xis, vt = ut + xit;
    return vs + target.acs(chart, u) * vt;
  }
  const double h = kJetStep;
  const Vec6 v = target_exp(target, chart, u, xi, steps);
  const Vec6 vs = (target_exp(target, chart, u + h * us, xi + h * xis, steps) -
                   target_exp(target, chart, u - h * us, xi - h * xis, steps)) /
                  (2.0 * h);
  const Vec6 vt = (target_exp(target, chart, u + h * ut, xi + h * xit, steps) -
                   target_exp(target, chart, u - h * ut, xi - h * xit, steps)) /
                  (2.0 * h);
  return transport_back(target, chart, u, xi, vs + target.acs(chart, v) * vt, steps);
}

VecX discrete_fj(const DiscretizedSphereMap& u, const TargetModel& target, const VecX& xi,
                 int steps) {
  const SphereGrid& g = *u.grid;
  DiscretizedSphereMap dx;
  dx.grid = u.grid;
  dx.set_flat(xi);
  const NodeValues nv = node_values(u), nx = node_values(dx);
  const int Q = g.test_size();
  VecX out(g.equations());
  for (int c = 0; c < 2; ++c) {
    MatX nodal(g.node_count(), 6);
    for (int n = 0; n < g.node_count(); ++n) {
      nodal.row(n) = nodal_fj(target, c, row6(nv.u[c], n), row6(nv.us[c], n),
                              row6(nv.ut[c], n), row6(nx.u[c], n), row6(nx.us[c], n),
                              row6(nx.ut[c], n), steps)
                         .transpose();
    }
    const MatX gal = g.weighted_test.transpose() * nodal;
    for (int d = 0; d < 6; ++d) out.segment((c * 6 + d) * Q, Q) = gal.col(d);
  }
  for_each_seam(g, [&](int j, int k, int row) {
    const Vec6 ya = u.coeff[0].transpose() * g.seam_a[j].row(k).transpose();
    const Vec6 yb = u.coeff[1].transpose() * g.seam_b[j].row(k).transpose();
    const Vec6 xa = dx.coeff[0].transpose() * g.seam_a[j].row(k).transpose();
    const Vec6 xb = dx.coeff[1].transpose() * g.seam_b[j].row(k).transpose();
    const Vec6 m = target.transition(target_exp(target, 0, ya, xa, steps)) -
                   target_exp(target, 1, yb, xb, steps);
    out.segment(row, 2) = m.segment(2 * j, 2);
  });
  return out;
}

CROperatorMatrix linearize(const DiscretizedSphereMap& u, const TargetModel& target, int steps) {
  return assemble(u, target, steps, true);
}

CROperatorMatrix linearize_serial(const DiscretizedSphereMap& u, const TargetModel& target,
                                  int steps) {
  return assemble(u, target, steps, false);
}

KernelReport kernel_cokernel(const MatX& a, double gap_factor) {
  const int rows = static_cast<int>(a.rows()), cols = static_cast<int>(a.cols());
  if (rows == 0 || cols == 0) throw ArgumentError("kernel_cokernel: empty matrix");
  Eigen::BDCSVD<MatX> svd(a, Eigen::ComputeFullV);
  const VecX& s = svd.singularValues();
  const MatX& v = svd.matrixV();
  VecX values(cols);
  for (int j = 0; j < cols; ++j) {
    values(j) = j < s.size() ? s(j) : (a * v.col(j)).norm();
  }
  std::vector<int> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return values(i) > values(j); });

  KernelReport rep;
  rep.spectrum.resize(cols);
  for (int j = 0; j < cols; ++j) rep.spectrum(j) = values(order[j]);
  rep.sigma_max = rep.spectrum(0);
  rep.threshold = rep.sigma_max * gap_factor;
  if (rep.sigma_max == 0.0) throw InconclusiveError("kernel_cokernel: zero matrix");
  int r = 0;
  while (r < cols && rep.spectrum(r) >= rep.threshold) ++r;
  if (r == cols) {
    rep.gap_ratio = std::numeric_limits<double>::infinity();
  } else {
    const double below = rep.spectrum(r);
    rep.gap_ratio = below > 0.0 ? rep.spectrum(r - 1) / below
                                : std::numeric_limits<double>::infinity();
    if (rep.gap_ratio < 10.0) {
      throw InconclusiveError("kernel_cokernel: no spectral gap at the threshold (ratio " +
                              std::to_string(rep.gap_ratio) + "); refine the grid");
    }
  }
  rep.kernel = cols - r;
  rep.cokernel = rows - r;
  rep.kernel_basis.resize(cols, rep.kernel);
  for (int j = 0; j < rep.kernel; ++j) rep.kernel_basis.col(j) = v.col(order[r + j]);
  return rep;
}

MatX mobius_fields(const SphereGrid& grid) {
  auto gp = std::make_shared<SphereGrid>(grid);
  MatX out(grid.unknowns(), 6);
  const cplx coef[6] = {1.0, cplx(0, 1), 1.0, cplx(0, 1), 1.0, cplx(0, 1)};
  const int power[6] = {0, 0, 1, 1, 2, 2};
  for (int f = 0; f < 6; ++f) {
    auto field = [&](int chart, double s, double t) {
      const cplx z(s, t);
      const cplx v = chart == 0 ? coef[f] * std::pow(z, power[f])
                                : -coef[f] * std::pow(z, 2 - power[f]);
      Vec6 y = Vec6::Zero();
      y(0) = v.real();
      y(1) = v.imag();
      return y;
    };
    out.col(f) = project_map(gp, field, "").flat();
  }
  return out;
}

VecX principal_angles(const MatX& a, const MatX& b) {
  const MatX qa = Eigen::HouseholderQR<MatX>(a).householderQ() * MatX::Identity(a.rows(), a.cols());
  const MatX qb = Eigen::HouseholderQR<MatX>(b).householderQ() * MatX::Identity(b.rows(), b.cols());
  Eigen::JacobiSVD<MatX> svd(qa.transpose() * qb);
  VecX s = svd.singularValues();
  VecX angles(s.size());
  for (int i = 0; i < s.size(); ++i) angles(i) = std::acos(std::min(1.0, s(i)));
  std::sort(angles.data(), angles.data() + angles.size());
  return angles;
}

double fibre_fraction(const SphereGrid& grid, const MatX& basis) {
  if (basis.cols() == 0) return 0.0;
  const MatX q =
      Eigen::HouseholderQR<MatX>(basis).householderQ() * MatX::Identity(basis.rows(), basis.cols());
  const int P = grid.basis_size();
  MatX fibre(4 * P, q.cols());
  int row = 0;
  for (int c = 0; c < 2; ++c)
    for (int d = 4; d < 6; ++d, row += P) fibre.middleRows(row, P) = q.middleRows((c * 6 + d) * P, P);
  return Eigen::JacobiSVD<MatX>(fibre).singularValues()(0);
}

double integrate_form(const DiscretizedSphereMap& u,
                      const std::function<Mat6(int, const Vec6&)>& form) {
  const SphereGrid& g = *u.grid;
  const NodeValues nv = node_values(u);
  double sum = 0.0;
  for (int c = 0; c < 2; ++c) {
    for (int n = 0; n < g.node_count(); ++n) {
      sum += g.weights(n) *
             row6(nv.us[c], n).dot(form(c, row6(nv.u[c], n)) * row6(nv.ut[c], n));
    }
  }
  return sum;
}

}  // namespace twistor
