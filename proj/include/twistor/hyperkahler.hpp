#pragma once

// Hyperkaehler triples on chart metrics and the product twistor structure
// X x S^2.

#include <array>
#include <vector>

#include "twistor/curvature.hpp"
#include "twistor/twistor_space.hpp"

namespace twistor {

// I_1 is the coordinate complex structure (z1 = x0 + i x1, z2 = x2 + i x3);
// omega_2 + i omega_3 is dz1 ^ dz2 rescaled to unit length, and I_2, I_3
// are obtained from omega_2, omega_3 by raising an index with g.
class HyperkaehlerTriple {
 public:
  explicit HyperkaehlerTriple(MetricChart chart) : chart_(std::move(chart)) {}

  const MetricChart& chart() const { return chart_; }

  // Coordinate endomorphisms I_1, I_2, I_3.
  std::array<Mat4, 3> I(const Point& x) const;
  // omega_a(u, v) = g(I_a u, v), as antisymmetric coordinate matrices.
  std::array<Mat4, 3> omega(const Point& x) const;
  // Real and imaginary part of the holomorphic symplectic form.
  std::array<Mat4, 2> Omega(const Point& x) const;
  // a_1 I_1 + a_2 I_2 + a_3 I_3. Throws ArgumentError unless |a| = 1.
  Mat4 I_a(const Point& x, const Vec3& a) const;
  // Columns are the unit self-dual forms (sigma+ components) of I_1..I_3,
  // so that I_a = J_theta with theta = R a.
  Mat3 fibre_rotation(const Point& x) const;

 private:
  MetricChart chart_;
};

struct TripleCheck {
  double quaternion = 0.0;     // max |I_a I_b - eps_abc I_c| and |I_a^2 + 1|
  double orthogonality = 0.0;  // max |I_a^T g I_a - g|
  double closedness = 0.0;     // max |d omega_a|
  double parallel = 0.0;       // max |nabla I_a|
  std::size_t samples = 0;
  bool passed(double algebraic_tol, double differential_tol) const {
    return quaternion < algebraic_tol && orthogonality < algebraic_tol &&
           closedness < differential_tol && parallel < differential_tol;
  }
};

TripleCheck check_triple(const HyperkaehlerTriple& triple, const std::vector<Point>& samples,
                         double h = 1e-4);

// Builds the triple and validates it on deterministic samples. Throws
// ValidityError when the chart is not hyperkaehler.
HyperkaehlerTriple hk_triple(const MetricChart& chart);

// J+-(x, a) = +-I_a + J_{S^2} in the coordinates (x, zeta) of p.chart,
// where a = theta_from_zeta(p.chart, p.zeta). J_{S^2} is d/dzeta1 ->
// d/dzeta2.
Mat6 product_twistor_acs(const HyperkaehlerTriple& triple, const TwistorPoint& p, int sign);

// (x, zeta_a) -> (x, zeta_theta) with theta = R(x) a, both in `chart`.
Vec6 product_to_twistor(const HyperkaehlerTriple& triple, FibreChart chart, const Vec6& y);

}  // namespace twistor
