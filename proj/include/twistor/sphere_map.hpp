#pragma once

// Maps from the Riemann sphere into a six-dimensional target, discretized on
// two unit discs (coordinates sigma and 1/sigma) glued along the unit
// circle. Each real target component is a polynomial of degree <= L in
// (Re sigma, Im sigma), expanded in orthonormal Zernike functions.
//
// The Cauchy-Riemann equation u_s + J(u) u_t = 0 is imposed by Galerkin
// projection onto polynomials of degree <= L - 1 and the charts are matched
// at 2L + 1 points of the circle. The resulting system has exactly six more
// unknowns than equations, the real index of a genus-zero curve with
// vanishing Chern pairing.

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "twistor/linalg.hpp"

namespace twistor {

// Almost complex target described in two coordinate charts. Chart 0
// receives the disc |sigma| <= 1 and chart 1 the disc |1/sigma| <= 1.
struct TargetModel {
  std::string name;
  std::function<Mat6(int chart, const Vec6& y)> acs;
  // christoffel[k](i, j) = Gamma^k_ij of the target metric used for
  // geodesics and parallel transport.
  std::function<std::array<Mat6, 6>(int chart, const Vec6& y)> christoffel;
  // Chart 0 -> chart 1 and its Jacobian.
  std::function<Vec6(const Vec6&)> transition;
  std::function<Mat6(const Vec6&)> transition_jacobian;
};

// Seam matching is by collocation, separately for each complex coordinate
// pair (y0, y1), (y2, y3), (y4, y5) of the target. Pair j uses
// 2L + 1 + twist[j] equally spaced points; twist[j] is the winding number of
// the pair's diagonal block of the transition Jacobian along the seam, so
// that negative line subbundles are resolved without aliasing. The twists of
// a map into a target with vanishing Chern pairing sum to zero and leave the
// equation count unchanged.
struct SphereGrid {
  int N = 0;
  int L = 0;
  int n_radial = 0;
  int n_angular = 0;
  std::vector<Vec2> nodes;  // (s, t) quadrature nodes in the unit disc
  VecX weights;
  MatX val, ds, dt;    // nodes x basis_size
  MatX weighted_test;  // nodes x test_size, rows scaled by the weights
  std::array<int, 3> twist{};
  std::array<std::vector<double>, 3> seam_angles;
  std::array<MatX, 3> seam_a;  // basis at sigma = exp(i phi)
  std::array<MatX, 3> seam_b;  // basis at 1/sigma = exp(-i phi)

  int basis_size() const { return static_cast<int>(val.cols()); }
  int test_size() const { return static_cast<int>(weighted_test.cols()); }
  int node_count() const { return static_cast<int>(nodes.size()); }
  int seam_count() const {
    return static_cast<int>(seam_angles[0].size() + seam_angles[1].size() +
                            seam_angles[2].size());
  }
  int unknowns() const { return 12 * basis_size(); }
  int equations() const { return 12 * test_size() + 2 * seam_count(); }
};

// Polynomial degree L = N / 2. Throws ArgumentError for odd N, N < 4 or
// |twist[j]| > L.
std::shared_ptr<const SphereGrid> sphere_grid(int N, std::array<int, 3> twist = {0, 0, 0});

// Orthonormal Zernike functions of degree <= L and their s, t derivatives
// at one point, ordered by degree.
void zernike_basis(int L, double s, double t, VecX& val, VecX& ds, VecX& dt);

struct DiscretizedSphereMap {
  std::shared_ptr<const SphereGrid> grid;
  std::array<MatX, 2> coeff;  // basis_size x 6 per chart
  std::string homotopy_class_tag;

  VecX flat() const;
  void set_flat(const VecX& c);
  Vec6 value_at(int chart, double s, double t) const;
};

struct NodeValues {
  std::array<MatX, 2> u, us, ut;  // node_count x 6
};
NodeValues node_values(const DiscretizedSphereMap& u);

// Least-squares fit of a function on each disc (exact for polynomials of
// degree <= L).
DiscretizedSphereMap project_map(std::shared_ptr<const SphereGrid> grid,
                                 const std::function<Vec6(int chart, double s, double t)>& f,
                                 std::string tag);

// The same map on a grid with different seam twists.
DiscretizedSphereMap with_twist(const DiscretizedSphereMap& u, std::array<int, 3> twist);

// Winding numbers of the complex-linear parts of the diagonal 2x2 blocks
// of the transition Jacobian along the seam of u. Throws ArgumentError when a
// block degenerates on the seam.
std::array<int, 3> seam_windings(const DiscretizedSphereMap& u, const TargetModel& target);

struct CRResidual {
  std::array<MatX, 2> nodal;  // u_s + J(u) u_t at the quadrature nodes
  VecX discrete;              // Galerkin projections, then seam mismatch
  double l2 = 0.0;            // quadrature l2 norm of the nodal field
  double sup = 0.0;           // max nodal component
  double discrete_sup = 0.0;  // max discrete component
};

CRResidual cr_residual(const DiscretizedSphereMap& u, const TargetModel& target);

// Geodesic exponential and parallel transport of the target metric,
// classical RK4. Throws TransportError on non-finite values.
Vec6 target_exp(const TargetModel& target, int chart, const Vec6& y, const Vec6& xi,
                int steps = 8);
// Transports w from exp_y(xi) back to y along the geodesic.
Vec6 transport_back(const TargetModel& target, int chart, const Vec6& y, const Vec6& xi,
                    const Vec6& w, int steps = 8);

// Phi_xi^{-1} (v_s + J(v) v_t) with v = exp_u(xi), for the one-node jet
// (u, u_s, u_t) and tangent jet (xi, xi_s, xi_t).
Vec6 nodal_fj(const TargetModel& target, int chart, const Vec6& u, const Vec6& us,
              const Vec6& ut, const Vec6& xi, const Vec6& xis, const Vec6& xit, int steps = 8);

// Discrete F_J of a coefficient-space tangent vector.
VecX discrete_fj(const DiscretizedSphereMap& u, const TargetModel& target, const VecX& xi,
                 int steps = 8);

struct CROperatorMatrix {
  MatX matrix;  // equations() x unknowns()
  int basis_size = 0;
  int test_size = 0;
  int seam_count = 0;
};

// Column of the coefficient of basis function b, component d, chart c; row
// of test function q, component d, chart c.
inline int unknown_index(const SphereGrid& g, int c, int d, int b) {
  return (c * 6 + d) * g.basis_size() + b;
}
inline int galerkin_index(const SphereGrid& g, int c, int d, int q) {
  return (c * 6 + d) * g.test_size() + q;
}

// D_0 F_J. The derivative in xi at each node is taken by central
// differences of nodal_fj; the xi_s, xi_t blocks are exact.
CROperatorMatrix linearize(const DiscretizedSphereMap& u, const TargetModel& target,
                           int steps = 8);
CROperatorMatrix linearize_serial(const DiscretizedSphereMap& u, const TargetModel& target,
                                  int steps = 8);

struct KernelReport {
  int kernel = 0;
  int cokernel = 0;
  double gap_ratio = 0.0;  // +inf when no value falls below the threshold
  double sigma_max = 0.0;
  double threshold = 0.0;
  VecX spectrum;      // descending, unknowns() entries
  MatX kernel_basis;  // unknowns() x kernel, orthonormal
};

// Counts spectrum values below sigma_max * gap_factor. Throws
// InconclusiveError when the gap in front of them has ratio < 10.
KernelReport kernel_cokernel(const MatX& matrix, double gap_factor);
inline KernelReport kernel_cokernel(const CROperatorMatrix& m, double gap_factor) {
  return kernel_cokernel(m.matrix, gap_factor);
}

// Infinitesimal Moebius reparametrizations of a map u(sigma) = (sigma, 0, ...)
// in both charts, as coefficient vectors (unknowns() x 6).
MatX mobius_fields(const SphereGrid& grid);

// Principal angles between the column spans, ascending.
VecX principal_angles(const MatX& a, const MatX& b);

// Largest fibre (components 4, 5) fraction of a unit vector in the span.
double fibre_fraction(const SphereGrid& grid, const MatX& basis);

// Integral of u^* Omega over the sphere, Omega given as a coordinate
// 2-form matrix on each chart.
double integrate_form(const DiscretizedSphereMap& u,
                      const std::function<Mat6(int chart, const Vec6& y)>& form);

}  // namespace twistor
