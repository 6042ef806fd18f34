#pragma once

// Levi-Civita connection and curvature of a chart metric at a point, in an
// oriented orthonormal frame, and the block form of the curvature operator
// with respect to the splitting of 2-forms into self-dual and anti-self-dual
// parts.

#include <array>
#include <utility>

#include "twistor/linalg.hpp"
#include "twistor/metric.hpp"

namespace twistor {

using Mat6x6 = Eigen::Matrix<double, 6, 6>;

struct OrthoFrame {
  // Rows are the orthonormal coframe e^a in the chart basis: g = e^T e.
  Mat4 coframe;
  // Columns are the dual frame vectors E_a: frame = coframe^{-1}.
  Mat4 frame;
  bool orientation_corrected = false;
};

// Cholesky coframe of g; when its orientation disagrees with `orientation`
// the last coframe vector is negated. Throws ValidityError if g is not
// positive definite.
OrthoFrame ortho_frame(const Mat4& g, int orientation);

// R_abcd, antisymmetric in (a,b) and (c,d). R_abab is the sectional
// curvature of the plane (E_a, E_b).
struct RiemannTensor {
  std::array<double, 256> r{};
  double operator()(int a, int b, int c, int d) const {
    return r[((a * 4 + b) * 4 + c) * 4 + d];
  }
  double& operator()(int a, int b, int c, int d) {
    return r[((a * 4 + b) * 4 + c) * 4 + d];
  }
};

// Everything the downstream modules need at one chart point.
struct PointGeometry {
  Point x{};
  Mat4 g;
  Mat4 g_inv;
  std::array<Mat4, 4> dg;              // dg[k](i, j) = d_k g_ij
  std::array<Mat4, 4> christoffel;     // christoffel[k](i, j) = Gamma^k_ij
  OrthoFrame frame;
  // Frame derivatives: d_frame[k](i, a) = d_k frame(i, a).
  std::array<Mat4, 4> d_frame;
  // Orthonormal connection matrices: conn[k](a, b) with
  // nabla_{d_k} E_b = sum_a conn[k](a, b) E_a. Antisymmetric.
  std::array<Mat4, 4> conn;
  RiemannTensor riemann;  // orthonormal frame components
};

PointGeometry point_geometry(const MetricChart& chart, const Point& x);

// Gamma^k_ij only, as christoffel[k](i, j).
std::array<Mat4, 4> christoffel_symbols(const MetricChart& chart, const Point& x);

// Orthonormal-frame Riemann tensor at x.
RiemannTensor riemann(const MetricChart& chart, const Point& x);

struct CurvatureBlocks {
  Mat6x6 R6;  // basis (s1+, s2+, s3+, s1-, s2-, s3-)
  Mat3 A;     // Lambda+ -> Lambda+
  Mat3 B;     // Lambda+ -> Lambda-
  Mat3 C;     // Lambda- -> Lambda-
  Mat4 ricci;
  double scalar = 0.0;
};

CurvatureBlocks blocks(const RiemannTensor& rm);
CurvatureBlocks curvature_blocks(const MetricChart& chart, const Point& x);

// 2-forms in an orthonormal frame are antisymmetric 4x4 matrices with
// <F, G> = 1/2 sum F_ab G_ab, so that {e^a ^ e^b}_{a<b} is orthonormal.
Mat4 wedge_basis(int a, int b);
Mat4 sigma_plus(int i);   // (e0^e_i + 1/2 eps_ijk e^j^e^k) / sqrt 2, i = 0..2
Mat4 sigma_minus(int i);  // (e0^e_i - 1/2 eps_ijk e^j^e^k) / sqrt 2
double form_inner(const Mat4& f, const Mat4& g);
Vec3 self_dual_part(const Mat4& f);       // components along sigma_plus
Vec3 anti_self_dual_part(const Mat4& f);  // components along sigma_minus
Mat4 self_dual_form(const Vec3& theta);   // sum theta_i sigma_plus(i)

// Sectional curvature extremes over oriented 2-planes. Planes are sampled
// through their (self-dual, anti-self-dual) unit pair, then polished by
// Riemannian gradient steps. n_planes >= 64.
std::pair<double, double> sectional_range(const CurvatureBlocks& b, int n_planes,
                                          unsigned seed = 7);
std::pair<double, double> sectional_range(const MetricChart& chart, const Point& x,
                                          int n_planes = 512);

}  // namespace twistor
