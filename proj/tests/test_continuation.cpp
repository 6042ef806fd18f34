#include <cmath>
#include <random>

#include "doctest.h"
#include "twistor/continuation.hpp"
#include "twistor/errors.hpp"

using namespace twistor;

namespace {

Mat4 transition_jacobian(const Point& x, double h = 1e-6) {
  Mat4 d;
  for (int k = 0; k < 4; ++k) {
    Point p = x, m = x;
    p[k] += h;
    m[k] -= h;
    const Point tp = bolt_transition(p), tm = bolt_transition(m);
    for (int i = 0; i < 4; ++i) d(i, k) = (tp[i] - tm[i]) / (2.0 * h);
  }
  return d;
}

Mat4 h_at(const Point& x) { return metric_values(bolt_perturbation()(x)); }

}  // namespace

TEST_CASE("perturbation is a global tensor that does not vanish on the bolt") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const Point x = {u(rng), u(rng), 0.3 * u(rng), 0.3 * u(rng)};
    if (x[0] * x[0] + x[1] * x[1] < 0.6) continue;
    const Mat4 d = transition_jacobian(x);
    CHECK((d.transpose() * h_at(bolt_transition(x)) * d - h_at(x)).cwiseAbs().maxCoeff() < 1e-7);
  }
  CHECK(h_at({0.5, 0.2, 0.0, 0.0}).norm() > 0.1);
  CHECK(h_at({0.0, 0.0, 0.0, 0.0}).norm() == 0.0);
  const Point x = {0.3, -0.4, 0.2, 0.1};
  CHECK((metric_values(metric_jet(perturbed_bolt(0.0), x)) -
         metric_values(metric_jet(catalog("eguchi-hanson-bolt"), x)))
            .norm() == 0.0);
}

TEST_CASE("unperturbed target agrees with the product structure") {
  const TargetModel a = perturbed_bolt_target(0.0, 1), b = bolt_product_target(1);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int i = 0; i < 10; ++i) {
    Vec6 y;
    for (int k = 0; k < 6; ++k) y(k) = u(rng);
    for (int chart : {0, 1}) CHECK((a.acs(chart, y) - b.acs(chart, y)).cwiseAbs().maxCoeff() < 1e-6);
  }
  CHECK_THROWS_AS(perturbed_bolt_target(0.1, 0), ArgumentError);
  CHECK_THROWS_AS(bolt_product_target(2), ArgumentError);
}

TEST_CASE("continuing to the same structure keeps the map") {
  const DiscretizedSphereMap u0 = bolt_lift(16);
  const ContinuationResult c = newton_continue(u0, bolt_product_target(1), 12, 1e-8);
  CHECK(c.converged);
  CHECK(c.iterations <= 1);
  CHECK((c.map.flat() - u0.flat()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(c.map.homotopy_class_tag == u0.homotopy_class_tag);
}

TEST_CASE("small perturbations continue the bolt sphere") {
  const DiscretizedSphereMap u0 = bolt_lift(16);
  const ContinuationResult c = newton_continue(u0, perturbed_bolt_target(1e-3, 1), 12, 1e-10);
  CHECK(c.converged);
  CHECK(c.message == "converged");
  CHECK(c.iterations >= 1);
  CHECK(c.iterations <= 4);
  CHECK(c.residual_trace.back() < 1e-10);
  CHECK(c.residual_trace.size() == static_cast<size_t>(c.iterations) + 1);
  CHECK(c.map.homotopy_class_tag == u0.homotopy_class_tag);
  CHECK(std::abs(integrate_form(c.map, perturbed_reznikov_form(1e-3))) < 5e-3);

  const ContinuationResult again =
      newton_continue(u0, perturbed_bolt_target(1e-3, 1), 12, 1e-10);
  CHECK(again.iterations == c.iterations);
  CHECK((again.map.flat() - c.map.flat()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("large perturbations are reported, not thrown") {
  const DiscretizedSphereMap u0 = bolt_lift(16);
  ContinuationResult c;
  CHECK_NOTHROW(c = newton_continue(u0, perturbed_bolt_target(100.0, 1), 6, 1e-10));
  CHECK_FALSE(c.converged);
  CHECK(c.message.rfind("diverged", 0) == 0);
  CHECK_FALSE(c.residual_trace.empty());

  const ContinuationResult s = newton_continue(u0, perturbed_bolt_target(1e-2, 1), 1, 1e-14);
  CHECK_FALSE(s.converged);
  CHECK(s.message.rfind("stalled", 0) == 0);
  CHECK(s.iterations == 1);
}

TEST_CASE("mechanism table") {
  const MechanismReport rep = mechanism_demo({0.0, 1e-3}, 16);
  CHECK(rep.N == 16);
  REQUIRE(rep.rows.size() == 2);
  for (const MechanismRow& r : rep.rows) {
    CHECK(r.converged);
    CHECK(r.residual < 1e-8);
    CHECK(std::abs(r.integral) < 5e-3);
    CHECK(r.margin <= 1e-9);
  }
  CHECK(rep.rows[0].iterations == 0);
  CHECK(rep.rows[1].initial_residual > rep.rows[1].residual);
  CHECK(bolt_region().size() == 625);
}
