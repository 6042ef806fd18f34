#pragma once

// Local twistor space of a chart: the bundle of unit self-dual 2-forms,
// with coordinates (x0..x3, zeta1, zeta2) where zeta is a stereographic
// coordinate on the fibre sphere.

#include <array>
#include <vector>

#include "twistor/curvature.hpp"

namespace twistor {

using Mat32 = Eigen::Matrix<double, 3, 2>;

// Stereographic fibre charts. A chart with centre c and tangent basis
// (b1, b2), b1 x b2 = c, parametrizes
//   theta = ((1 - |z|^2) c + 2 z1 b1 + 2 z2 b2) / (1 + |z|^2).
enum class FibreChart { North, South, Equatorial };

struct FibreChartFrame {
  Vec3 c, b1, b2;
};

FibreChartFrame fibre_chart_frame(FibreChart chart);
Vec3 theta_from_zeta(FibreChart chart, const Vec2& zeta);
Vec2 zeta_from_theta(FibreChart chart, const Vec3& theta);
// d theta / d zeta; conformal with scale 2 / (1 + |zeta|^2).
Mat32 dtheta_dzeta(FibreChart chart, const Vec2& zeta);

struct TwistorPoint {
  Point x{};
  Vec3 theta = Vec3::UnitZ();
  FibreChart chart = FibreChart::North;
  Vec2 zeta = Vec2::Zero();
};

// Uses the north chart when theta_3 >= 0, else the south chart. Throws
// ArgumentError unless |theta| = 1 within 1e-9.
TwistorPoint make_twistor_point(const Point& x, const Vec3& theta);
TwistorPoint twistor_point_at(const Point& x, FibreChart chart, const Vec2& zeta);

// Orthonormal-frame matrix of J_theta: g(J v, w) = sqrt 2 theta(v, w).
// Throws ArgumentError unless |theta| = 1 within 1e-9.
Mat4 fibre_to_acs(const Vec3& theta);
// The same endomorphism in chart coordinates.
Mat4 fibre_to_acs(const Vec3& theta, const OrthoFrame& frame);

// Lambda+ connection coefficients in the sigma+ basis:
// (nabla_k theta)_i = d_k theta_i + sum_j alpha[k](i, j) theta_j.
std::array<Mat3, 4> lambda_plus_connection(const PointGeometry& pg);
// Curvature of Lambda+ on the orthonormal pair (E_c, E_d).
Mat3 lambda_plus_curvature(const PointGeometry& pg, int c, int d);
// Curvature on a pair of coordinate vectors.
Mat3 lambda_plus_curvature(const PointGeometry& pg, const Vec4& u, const Vec4& v);

struct TwistorTangentFrame {
  // Coordinate 6-vectors: horizontal lifts of E_0..E_3, then the oriented
  // orthonormal vertical pair.
  std::array<Vec6, 4> horizontal;
  std::array<Vec6, 2> vertical;
  Mat6 basis;  // columns H_0..H_3, F_1, F_2
  std::array<Mat3, 4> connection_form;
  Vec3 f1, f2;  // vertical frame as vectors in Lambda+, f1 x f2 = theta
  double lambda = 1.0;
};

TwistorTangentFrame twistor_frame(const MetricChart& chart, const TwistorPoint& p);
TwistorTangentFrame twistor_frame(const PointGeometry& pg, const TwistorPoint& p);

// J+- in the frame basis (H_0..H_3, F_1, F_2): +-J_theta on H and the
// rotation F_1 -> F_2 on V.
Mat6 twistor_acs_frame(const Vec3& theta, int sign);
// J+- as a coordinate endomorphism.
Mat6 twistor_acs(const MetricChart& chart, const TwistorPoint& p, int sign);

// Coordinate matrix of the Reznikov 2-form.
Mat6 reznikov_matrix(const MetricChart& chart, const TwistorPoint& p);
double reznikov_form(const MetricChart& chart, const TwistorPoint& p, const Vec6& u,
                     const Vec6& v);

// Integral of omega over the fibre at x (two hemispheric charts, polar
// Gauss-Legendre quadrature).
double fibre_integral(const MetricChart& chart, const Point& x, int n_radial = 24,
                      int n_angular = 48);

// Max |d omega| component by central differences in the six coordinates.
double d_omega_check(const MetricChart& chart, const TwistorPoint& p, double h = 1e-4);

// Max |N_J| component over the 15 frame pairs, expressed in the frame.
double nijenhuis(const MetricChart& chart, const TwistorPoint& p, int sign,
                 double h = 1e-4);

// omega(U, W) estimated from the holonomy of the projected connection around
// the parallelogram spanned by s U, s W.
double holonomy_form(const MetricChart& chart, const TwistorPoint& p, const Vec6& u,
                     const Vec6& v, double s = 1e-3, int steps = 8);

struct ComparisonResult {
  Vec3 theta;     // unit self-dual form for g'
  Mat3 dtheta;    // differential of the unnormalized-then-normalized map
  double stretch; // |psi(theta)| before normalization
};

// Carries a g-self-dual unit form at x to the g'-self-dual unit form given
// by projecting along Lambda- of g'. Throws ComparisonError when the
// projection degenerates.
ComparisonResult comparison_map(const MetricChart& g, const MetricChart& g_prime,
                                const Point& x, const Vec3& theta);

// J'_{+-} of g' pulled back to the twistor coordinates of g through the
// comparison map (x, zeta) -> (x, zeta'(psi(theta(zeta)))).
Mat6 pulled_back_acs(const MetricChart& g, const MetricChart& g_prime,
                     const TwistorPoint& p, int sign, double h = 1e-5);

// Max over samples of |J' - J| plus max |d(J' - J)| (coordinate
// components, derivatives by central differences).
double acs_c1_distance(const MetricChart& g, const MetricChart& g_prime,
                       const std::vector<TwistorPoint>& samples, int sign,
                       double h = 1e-4);

}  // namespace twistor
