#include "twistor/curvature.hpp"

#include <cmath>
#include <random>

#include "twistor/errors.hpp"

namespace twistor {

namespace {

using JetMat = std::array<std::array<Jet2, 4>, 4>;

// Upper-triangular U with g = U^T U, computed on jets so that frame
// derivatives come for free.
JetMat jet_cholesky_upper(const MetricJet& g) {
  JetMat u{};
  for (int i = 0; i < kDim; ++i) {
    Jet2 d = g[sym_index(i, i)];
    for (int k = 0; k < i; ++k) d -= u[k][i] * u[k][i];
    if (!(d.value > 0.0)) throw ValidityError("metric not positive definite");
    u[i][i] = sqrt(d);
    const Jet2 inv = reciprocal(u[i][i]);
    for (int j = i + 1; j < kDim; ++j) {
      Jet2 s = g[sym_index(i, j)];
      for (int k = 0; k < i; ++k) s -= u[k][i] * u[k][j];
      u[i][j] = s * inv;
    }
  }
  return u;
}

JetMat jet_upper_inverse(const JetMat& u) {
  JetMat e{};
  for (int i = kDim - 1; i >= 0; --i) {
    const Jet2 inv = reciprocal(u[i][i]);
    e[i][i] = inv;
    for (int j = i + 1; j < kDim; ++j) {
      Jet2 s(0.0);
      for (int k = i + 1; k <= j; ++k) s += u[i][k] * e[k][j];
      e[i][j] = -(s * inv);
    }
  }
  return e;
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

OrthoFrame ortho_frame(const Mat4& g, int orientation) {
  Eigen::LLT<Mat4> llt(g);
  if (llt.info() != Eigen::Success || !g.allFinite()) {
    throw ValidityError("ortho_frame: metric not positive definite");
  }
  OrthoFrame f;
  f.coframe = llt.matrixU();
  if (orientation < 0) {
    f.coframe.row(3) *= -1.0;
    f.orientation_corrected = true;
  }
  f.frame = f.coframe.inverse();
  return f;
}

namespace {

std::array<Mat4, 4> christoffel_from(const Mat4& g_inv, const std::array<Mat4, 4>& dg) {
  // Gamma^k_ij = 1/2 g^kl (d_i g_lj + d_j g_li - d_l g_ij)
  std::array<std::array<std::array<double, 4>, 4>, 4> lower{};  // [l][i][j]
  for (int l = 0; l < kDim; ++l) {
    for (int i = 0; i < kDim; ++i) {
      for (int j = 0; j < kDim; ++j) {
        lower[l][i][j] = 0.5 * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
      }
    }
  }
  std::array<Mat4, 4> gamma;
  for (int k = 0; k < kDim; ++k) {
    for (int i = 0; i < kDim; ++i) {
      for (int j = 0; j < kDim; ++j) {
        double s = 0.0;
        for (int l = 0; l < kDim; ++l) s += g_inv(k, l) * lower[l][i][j];
        gamma[k](i, j) = s;
      }
    }
  }
  return gamma;
}

}  // namespace

PointGeometry point_geometry(const MetricChart& chart, const Point& x) {
  const MetricJet gj = metric_jet(chart, x);
  PointGeometry pg;
  pg.x = x;
  pg.g = metric_values(gj);
  for (int k = 0; k < kDim; ++k) {
    for (int i = 0; i < kDim; ++i) {
      for (int j = 0; j < kDim; ++j) pg.dg[k](i, j) = gj[sym_index(i, j)].grad[k];
    }
  }
  pg.g_inv = pg.g.inverse();

  pg.christoffel = christoffel_from(pg.g_inv, pg.dg);

  // d_m Gamma^k_ij
  std::array<std::array<Mat4, 4>, 4> d_gamma{};  // [m][k](i, j)
  for (int m = 0; m < kDim; ++m) {
    const Mat4 d_ginv = -pg.g_inv * pg.dg[m] * pg.g_inv;
    for (int k = 0; k < kDim; ++k) {
      for (int i = 0; i < kDim; ++i) {
        for (int j = 0; j < kDim; ++j) {
          double s = 0.0;
          for (int l = 0; l < kDim; ++l) {
            const double d_lower =
                0.5 * (gj[sym_index(l, j)].h(m, i) + gj[sym_index(l, i)].h(m, j) -
                       gj[sym_index(i, j)].h(m, l));
            const double lower =
                0.5 * (pg.dg[i](l, j) + pg.dg[j](l, i) - pg.dg[l](i, j));
            s += d_ginv(k, l) * lower + pg.g_inv(k, l) * d_lower;
          }
          d_gamma[m][k](i, j) = s;
        }
      }
    }
  }

  // R^r_{s m n} = d_m Gamma^r_ns - d_n Gamma^r_ms + Gamma^r_ml Gamma^l_ns
  //               - Gamma^r_nl Gamma^l_ms, then lowered with g.
  RiemannTensor up;
  for (int r = 0; r < kDim; ++r) {
    for (int s = 0; s < kDim; ++s) {
      for (int m = 0; m < kDim; ++m) {
        for (int n = 0; n < kDim; ++n) {
          double v = d_gamma[m][r](n, s) - d_gamma[n][r](m, s);
          for (int l = 0; l < kDim; ++l) {
            v += pg.christoffel[r](m, l) * pg.christoffel[l](n, s) -
                 pg.christoffel[r](n, l) * pg.christoffel[l](m, s);
          }
          up(r, s, m, n) = v;
        }
      }
    }
  }
  RiemannTensor low;
  for (int r = 0; r < kDim; ++r) {
    for (int s = 0; s < kDim; ++s) {
      for (int m = 0; m < kDim; ++m) {
        for (int n = 0; n < kDim; ++n) {
          double v = 0.0;
          for (int a = 0; a < kDim; ++a) v += pg.g(r, a) * up(a, s, m, n);
          low(r, s, m, n) = v;
        }
      }
    }
  }

  // Frame from the jet Cholesky factor (carries derivatives).
  JetMat u = jet_cholesky_upper(gj);
  if (chart.orientation < 0) {
    for (int j = 0; j < kDim; ++j) u[3][j] = -u[3][j];
  }
  JetMat e = jet_upper_inverse(u);
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) {
      pg.frame.coframe(i, j) = u[i][j].value;
      pg.frame.frame(i, j) = e[i][j].value;
      for (int k = 0; k < kDim; ++k) pg.d_frame[k](i, j) = e[i][j].grad[k];
    }
  }
  pg.frame.orientation_corrected = chart.orientation < 0;

  // conn[k](a, b) = e^a( nabla_k E_b ).
  const Mat4& E = pg.frame.frame;
  const Mat4& cof = pg.frame.coframe;
  for (int k = 0; k < kDim; ++k) {
    Mat4 nabla_e = pg.d_frame[k];  // column b: d_k E_b + Gamma^i_kj E_b^j
    for (int i = 0; i < kDim; ++i) {
      for (int b = 0; b < kDim; ++b) {
        double s = 0.0;
        for (int j = 0; j < kDim; ++j) s += pg.christoffel[i](k, j) * E(j, b);
        nabla_e(i, b) += s;
      }
    }
    pg.conn[k] = cof * nabla_e;
  }

  // Orthonormal components R_abcd = R_ijkl E_ia E_jb E_kc E_ld.
  RiemannTensor t1, t2;
  auto contract = [&](const RiemannTensor& in, RiemannTensor& out, int slot) {
    for (int i0 = 0; i0 < kDim; ++i0)
      for (int i1 = 0; i1 < kDim; ++i1)
        for (int i2 = 0; i2 < kDim; ++i2)
          for (int i3 = 0; i3 < kDim; ++i3) {
            int idx[4] = {i0, i1, i2, i3};
            const int a = idx[slot];
            double v = 0.0;
            for (int q = 0; q < kDim; ++q) {
              idx[slot] = q;
              v += in(idx[0], idx[1], idx[2], idx[3]) * E(q, a);
            }
            out(i0, i1, i2, i3) = v;
          }
  };
  contract(low, t1, 0);
  contract(t1, t2, 1);
  contract(t2, t1, 2);
  contract(t1, pg.riemann, 3);
  return pg;
}

std::array<Mat4, 4> christoffel_symbols(const MetricChart& chart, const Point& x) {
  const MetricJet gj = metric_jet(chart, x);
  std::array<Mat4, 4> dg;
  for (int k = 0; k < kDim; ++k) {
    for (int i = 0; i < kDim; ++i) {
      for (int j = 0; j < kDim; ++j) dg[k](i, j) = gj[sym_index(i, j)].grad[k];
    }
  }
  return christoffel_from(metric_values(gj).inverse(), dg);
}

RiemannTensor riemann(const MetricChart& chart, const Point& x) {
  return point_geometry(chart, x).riemann;
}

Mat4 wedge_basis(int a, int b) {
  Mat4 m = Mat4::Zero();
  m(a, b) = 1.0;
  m(b, a) = -1.0;
  return m;
}

Mat4 sigma_plus(int i) {
  const int j = (i + 1) % 3 + 1, k = (i + 2) % 3 + 1;
  return kInvSqrt2 * (wedge_basis(0, i + 1) + wedge_basis(j, k));
}

Mat4 sigma_minus(int i) {
  const int j = (i + 1) % 3 + 1, k = (i + 2) % 3 + 1;
  return kInvSqrt2 * (wedge_basis(0, i + 1) - wedge_basis(j, k));
}

double form_inner(const Mat4& f, const Mat4& g) {
  return 0.5 * f.cwiseProduct(g).sum();
}

Vec3 self_dual_part(const Mat4& f) {
  return Vec3(form_inner(f, sigma_plus(0)), form_inner(f, sigma_plus(1)),
              form_inner(f, sigma_plus(2)));
}

Vec3 anti_self_dual_part(const Mat4& f) {
  return Vec3(form_inner(f, sigma_minus(0)), form_inner(f, sigma_minus(1)),
              form_inner(f, sigma_minus(2)));
}

Mat4 self_dual_form(const Vec3& theta) {
  return theta(0) * sigma_plus(0) + theta(1) * sigma_plus(1) +
         theta(2) * sigma_plus(2);
}

CurvatureBlocks blocks(const RiemannTensor& rm) {
  // Rm as a symmetric bilinear form on 2-forms:
  // Rm(F, G) = 1/4 sum F_ab R_abcd G_cd, so Rm(e_a^e_b, e_c^e_d) = R_abcd.
  std::array<Mat4, 6> basis;
  for (int i = 0; i < 3; ++i) {
    basis[i] = sigma_plus(i);
    basis[i + 3] = sigma_minus(i);
  }
  CurvatureBlocks out;
  for (int p = 0; p < 6; ++p) {
    for (int q = 0; q < 6; ++q) {
      double s = 0.0;
      for (int a = 0; a < kDim; ++a)
        for (int b = 0; b < kDim; ++b) {
          if (basis[p](a, b) == 0.0) continue;
          for (int c = 0; c < kDim; ++c)
            for (int d = 0; d < kDim; ++d) {
              if (basis[q](c, d) == 0.0) continue;
              s += basis[p](a, b) * rm(a, b, c, d) * basis[q](c, d);
            }
        }
      out.R6(p, q) = 0.25 * s;
    }
  }
  out.A = out.R6.block<3, 3>(0, 0);
  out.B = out.R6.block<3, 3>(3, 0);
  out.C = out.R6.block<3, 3>(3, 3);
  out.ricci.setZero();
  for (int b = 0; b < kDim; ++b)
    for (int d = 0; d < kDim; ++d) {
      double s = 0.0;
      for (int a = 0; a < kDim; ++a) s += rm(a, b, a, d);
      out.ricci(b, d) = s;
    }
  out.scalar = out.ricci.trace();
  return out;
}

CurvatureBlocks curvature_blocks(const MetricChart& chart, const Point& x) {
  return blocks(riemann(chart, x));
}

namespace {

double plane_curvature(const CurvatureBlocks& b, const Vec3& p, const Vec3& m) {
  return 0.5 * (p.dot(b.A * p) + 2.0 * m.dot(b.B * p) + m.dot(b.C * m));
}

// Gradient ascent (sign = +1) or descent (sign = -1) on S^2 x S^2.
double polish_plane(const CurvatureBlocks& b, Vec3 p, Vec3 m, double sign) {
  double val = sign * plane_curvature(b, p, m);
  const double scale = Eigen::SelfAdjointEigenSolver<Mat6x6>(b.R6).eigenvalues().cwiseAbs().maxCoeff();
  if (scale == 0.0) return sign * val;
  const double max_step = 1.0 / scale;
  double step = max_step;
  for (int it = 0; it < 2000 && step > 1e-14 * max_step; ++it) {
    Vec3 gp = b.A * p + b.B.transpose() * m;
    Vec3 gm = b.C * m + b.B * p;
    gp = sign * (gp - gp.dot(p) * p);
    gm = sign * (gm - gm.dot(m) * m);
    if (gp.norm() + gm.norm() < 1e-15) break;
    bool improved = false;
    while (step > 1e-14 * max_step) {
      const Vec3 pn = (p + step * gp).normalized();
      const Vec3 mn = (m + step * gm).normalized();
      const double vn = sign * plane_curvature(b, pn, mn);
      if (vn > val) {
        p = pn;
        m = mn;
        val = vn;
        step = std::min(2.0 * step, max_step);
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return sign * val;
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-9);
  return v.normalized();
}

}  // namespace

std::pair<double, double> sectional_range(const CurvatureBlocks& b, int n_planes,
                                          unsigned seed) {
  if (n_planes < 64) throw ArgumentError("sectional_range: n_planes must be >= 64");
  std::mt19937_64 rng(seed);
  double kmin = 1e300, kmax = -1e300;
  Vec3 pmin, mmin, pmax, mmax;
  for (int s = 0; s < n_planes; ++s) {
    const Vec3 p = random_unit(rng), m = random_unit(rng);
    const double k = plane_curvature(b, p, m);
    if (k < kmin) { kmin = k; pmin = p; mmin = m; }
    if (k > kmax) { kmax = k; pmax = p; mmax = m; }
  }
  kmin = std::min(kmin, polish_plane(b, pmin, mmin, -1.0));
  kmax = std::max(kmax, polish_plane(b, pmax, mmax, +1.0));
  return {kmin, kmax};
}

std::pair<double, double> sectional_range(const MetricChart& chart, const Point& x,
                                          int n_planes) {
  return sectional_range(curvature_blocks(chart, x), n_planes);
}

}  // namespace twistor
