#pragma once

// Oriented metric charts: closed-form catalog entries, expression-defined
// metrics and perturbation families, all evaluable to second-order jets.

#include <array>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "twistor/jet.hpp"
#include "twistor/linalg.hpp"

namespace twistor {

// Packed symmetric g_ij, entry sym_index(i, j).
using MetricJet = std::array<Jet2, kSymSize>;
using MetricEvaluator = std::function<MetricJet(const Point&)>;

// Region of chart coordinates. `contains` tests the true open domain; the
// admissible region is shrunk by `margin` so finite-difference stencils
// around admissible points never leave the domain.
class Domain {
 public:
  enum class Kind { Box, Ball, Shell, Bidisc };

  static Domain box(double half_width, double margin);
  static Domain ball(double radius, double margin);
  static Domain shell(double r_min, double r_max, double margin);
  // |(x0, x1)| < r_first and |(x2, x3)| < r_second.
  static Domain bidisc(double r_first, double r_second, double margin);

  bool contains(const Point& x) const;
  bool admissible(const Point& x) const;
  // Uniform-ish random admissible point.
  Point sample(std::mt19937_64& rng) const;
  std::string describe() const;

  Kind kind() const { return kind_; }
  double inner() const { return a_; }
  double outer() const { return b_; }
  double margin() const { return margin_; }

 private:
  bool inside(const Point& x, double shrink) const;

  Kind kind_ = Kind::Box;
  double a_ = 1.0;  // half width / radius / r_min / r_first
  double b_ = 1.0;  // unused / unused / r_max / r_second
  double margin_ = 0.0;
};

struct MetricChart {
  std::string name;
  Domain domain;
  MetricEvaluator evaluator;
  int orientation = +1;
};

std::vector<std::string> catalog_names();

// Throws LookupError for unknown names.
MetricChart catalog(const std::string& name);

// Validated evaluation: DomainError outside the chart domain, ValidityError
// if g(x) is not positive definite.
MetricJet metric_jet(const MetricChart& chart, const Point& x);

Mat4 metric_values(const MetricJet& g);
bool positive_definite(const Mat4& g);

struct PerturbationSpec {
  MetricChart base;
  MetricEvaluator direction;  // symmetric 2-tensor h
  double t = 0.0;
};

// Chart evaluating g + t*h. At t == 0 evaluation returns the base jets
// unchanged.
MetricChart perturb(const PerturbationSpec& spec);

// Symmetric tensor h_ij = bump(|x - center| / radius) * delta_ij where bump
// is the standard C-infinity bump exp(1 - 1/(1 - s^2)) for s < 1.
MetricEvaluator diagonal_bump(const Point& center, double radius);

// Conformal factor f(x) lifted to the tensor f * delta_ij.
MetricEvaluator conformal_metric(std::function<Jet2(const std::array<Jet2, kDim>&)> factor);

struct SelfCheckReport {
  double max_ricci = 0.0;
  double max_a = 0.0;
  double max_b = 0.0;
  std::size_t samples = 0;
  bool passed(double tol) const {
    return max_ricci < tol && max_a < tol && max_b < tol;
  }
};

// Max |Ric|, |A|, |B| (Frobenius norms) over the samples.
SelfCheckReport eh_selfcheck(const MetricChart& chart,
                             const std::vector<Point>& samples);

// Hermitian data of a Kaehler metric in complex coordinates
// z1 = x0 + i x1, z2 = x2 + i x3, lifted to the real symmetric metric
// g = Re(h_{a b*} dz_a dz*_b).
struct HermitianJet {
  Jet2 h11, h22;          // real diagonal entries
  Jet2 re12, im12;        // h_{1 2*}
};
MetricJet real_metric_from_hermitian(const HermitianJet& h);

// Eguchi-Hanson (a = 1) on the total space of O(-2), coordinates
// (z, w) = (x0 + i x1, x2 + i x3). The same formula serves both bundle
// charts, related by (z, w) -> (1/z, z^2 w).
HermitianJet eguchi_hanson_bolt_hermitian(const std::array<Jet2, kDim>& x, double a);

// Transition between the two bolt charts, (z, w) -> (1/z, z^2 w). It is an
// involution up to the inverse map (z', w') -> (1/z', z'^2 w').
Point bolt_transition(const Point& x);

}  // namespace twistor
