#pragma once

// The Eguchi-Hanson bolt sphere as a holomorphic curve in the product
// twistor space X x S^2, and its continuation under perturbations of the
// metric.

#include <functional>
#include <string>
#include <vector>

#include "twistor/hyperkahler.hpp"
#include "twistor/sphere_map.hpp"
#include "twistor/taming.hpp"

namespace twistor {

// J+- = +-I_a + J_{S^2} on the two bolt charts, with the fibre sphere in the
// equatorial stereographic chart (zeta = 0 is a = (1, 0, 0)). The chart
// change is (z, w, zeta) -> (1/z, z^2 w, -zeta).
TargetModel bolt_product_target(int sign);

// Zero section sigma -> (sigma, 0) at a = (1, 0, 0). Throws ArgumentError
// for N < 16.
DiscretizedSphereMap bolt_lift(int N);

// h = exp(-2 v) dp (x) dp with v = |w|^2 (1 + |z|^2)^2 and
// p = |z|^2 / (1 + |z|^2). The formula is the same in both bolt charts.
MetricEvaluator bolt_perturbation();
// g + t h on the first bolt chart. h must describe one tensor in both
// charts.
MetricChart perturbed_bolt(double t, const MetricEvaluator& h = bolt_perturbation());

// J+- of g + t h carried to X x S^2 of g: the product point (x, a) goes to
// the twistor point of g + t h obtained from sum a_i omega_i by the
// comparison map.
TargetModel perturbed_bolt_target(double t, int sign,
                                  const MetricEvaluator& h = bolt_perturbation());
// Reznikov form of g + t h carried to X x S^2 of g the same way.
std::function<Mat6(int, const Vec6&)> perturbed_reznikov_form(
    double t, const MetricEvaluator& h = bolt_perturbation());

struct ContinuationResult {
  bool converged = false;
  DiscretizedSphereMap map;
  int iterations = 0;  // Newton steps taken
  std::vector<double> residual_trace;
  std::string message;
};

// Gauss-Newton with minimum-norm steps on the discrete F_J; updates move
// each node along target geodesics and are refitted to the polynomial
// space. Failures are reported, never thrown.
ContinuationResult newton_continue(const DiscretizedSphereMap& u0, const TargetModel& target,
                                   int max_iter, double tol, int steps = 8);

struct MechanismRow {
  double t = 0.0;
  bool converged = false;
  int iterations = 0;
  double initial_residual = 0.0;
  double residual = 0.0;
  double integral = 0.0;  // perturbed Reznikov form over the continued sphere
  double margin = 0.0;    // min taming margin of g + t h near the bolt
  std::string message;
};

struct MechanismReport {
  int N = 0;
  std::vector<MechanismRow> rows;
};

// Sample region used for the margins: a 5^4 grid of half width 0.7
// around the origin of the first bolt chart.
std::vector<Point> bolt_region();

MechanismReport mechanism_demo(const std::vector<double>& t_values, int N = 24,
                               const MetricEvaluator& h = bolt_perturbation(),
                               int max_iter = 12, double tol = 1e-10);

}  // namespace twistor
