#include "twistor/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "twistor/errors.hpp"

namespace twistor {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ArgumentError("gauss_legendre: n must be positive");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jac(k, k - 1) = beta;
    jac(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (b + a);
  for (int i = 0; i < n; ++i) {
    const double v = es.eigenvectors()(0, i);
    r.nodes[i] = mid + half * es.eigenvalues()(i);
    r.weights[i] = 2.0 * v * v * half;
  }
  return r;
}

}  // namespace twistor
