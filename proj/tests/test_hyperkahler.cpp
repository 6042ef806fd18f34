#include <cmath>
#include <random>

#include "doctest.h"
#include "twistor/errors.hpp"
#include "twistor/hyperkahler.hpp"

using namespace twistor;

namespace {

std::vector<Point> samples(const MetricChart& chart, int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  for (int i = 0; i < n; ++i) out.push_back(chart.domain.sample(rng));
  return out;
}

double max_abs(const MatX& m) { return m.cwiseAbs().maxCoeff(); }

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

}  // namespace

TEST_CASE("flat triple is the standard quaternionic structure") {
  const HyperkaehlerTriple t = hk_triple(catalog("flat"));
  const auto I = t.I({0.3, -0.2, 0.1, 0.5});
  const auto J = t.I({-1.0, 0.7, 0.2, 0.0});
  for (int a = 0; a < 3; ++a) {
    CHECK(max_abs(I[a] - J[a]) < 1e-14);
    CHECK(max_abs(I[a] - fibre_to_acs(Vec3::Unit(a))) < 1e-14);
  }
  CHECK(max_abs(t.I_a({0, 0, 0, 0}, Vec3::UnitZ()) - I[2]) < 1e-14);
  CHECK(max_abs(t.I_a({0, 0, 0, 0}, Vec3::UnitX()) - I[0]) < 1e-14);
  CHECK_THROWS_AS(t.I_a({0, 0, 0, 0}, Vec3(1, 1, 0)), ArgumentError);
}

TEST_CASE("Eguchi-Hanson triples") {
  for (const char* name : {"eguchi-hanson", "eguchi-hanson-bolt"}) {
    const MetricChart chart = catalog(name);
    const HyperkaehlerTriple t = hk_triple(chart);
    const TripleCheck c = check_triple(t, samples(chart, 50, 5));
    INFO(name);
    CHECK(c.samples == 50);
    CHECK(c.quaternion < 1e-9);
    CHECK(c.orthogonality < 1e-9);
    CHECK(c.closedness < 1e-5);
    CHECK(c.parallel < 1e-5);
  }
}

TEST_CASE("non-hyperkaehler charts are rejected") {
  CHECK_THROWS_AS(hk_triple(catalog("fubini-study-cp2")), ValidityError);
  CHECK_THROWS_AS(hk_triple(catalog("round-s4")), ValidityError);
}

TEST_CASE("second bolt chart sees the conjugate holomorphic form") {
  const HyperkaehlerTriple t = hk_triple(catalog("eguchi-hanson-bolt"));
  for (const Point& x : samples(t.chart(), 20, 8)) {
    if (x[0] * x[0] + x[1] * x[1] < 0.5) continue;
    const Point y = bolt_transition(x);
    if (!t.chart().domain.admissible(y)) continue;
    const Mat4 d = transition_jacobian(x);
    const auto Ix = t.I(x), Iy = t.I(y);
    CHECK(max_abs(d * Ix[0] * d.inverse() - Iy[0]) < 1e-7);
    CHECK(max_abs(d * Ix[1] * d.inverse() + Iy[1]) < 1e-7);
    CHECK(max_abs(d * Ix[2] * d.inverse() + Iy[2]) < 1e-7);
  }
}

TEST_CASE("product twistor structure") {
  const HyperkaehlerTriple t = hk_triple(catalog("eguchi-hanson-bolt"));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int s = 0; s < 20; ++s) {
    const TwistorPoint p = twistor_point_at(t.chart().domain.sample(rng), FibreChart::North,
                                            Vec2(u(rng), u(rng)));
    for (int sign : {1, -1}) {
      const Mat6 j = product_twistor_acs(t, p, sign);
      CHECK(max_abs(j * j + Mat6::Identity()) < 1e-12);
    }
  }
  const TwistorPoint pole = twistor_point_at({0.2, 0.1, 0.3, -0.4}, FibreChart::North, Vec2::Zero());
  const Mat6 jm = product_twistor_acs(t, pole, -1);
  CHECK(max_abs(jm.topLeftCorner<4, 4>() + t.I(pole.x)[2]) < 1e-14);
  CHECK_THROWS_AS(product_twistor_acs(t, pole, 0), ArgumentError);
}

TEST_CASE("product structure agrees with the twistor structure on flat space") {
  const MetricChart flat = catalog("flat");
  const HyperkaehlerTriple t = hk_triple(flat);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int s = 0; s < 20; ++s) {
    const TwistorPoint p = twistor_point_at(flat.domain.sample(rng), FibreChart::North,
                                            Vec2(u(rng), u(rng)));
    for (int sign : {1, -1}) {
      CHECK(max_abs(product_twistor_acs(t, p, sign) - twistor_acs(flat, p, sign)) < 1e-8);
    }
  }
}

TEST_CASE("product structure agrees with the twistor structure on Eguchi-Hanson") {
  for (const char* name : {"eguchi-hanson", "eguchi-hanson-bolt"}) {
    const MetricChart chart = catalog(name);
    const HyperkaehlerTriple t = hk_triple(chart);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int s = 0; s < 10; ++s) {
      const FibreChart fc = FibreChart::Equatorial;
      const TwistorPoint p = twistor_point_at(chart.domain.sample(rng), fc, Vec2(u(rng), u(rng)));
      Vec6 y;
      for (int i = 0; i < 4; ++i) y(i) = p.x[i];
      y(4) = p.zeta(0);
      y(5) = p.zeta(1);
      const Vec6 yt = product_to_twistor(t, fc, y);
      Mat6 d;
      const double h = 1e-6;
      for (int k = 0; k < 6; ++k) {
        Vec6 e = Vec6::Zero();
        e(k) = h;
        d.col(k) = (product_to_twistor(t, fc, y + e) - product_to_twistor(t, fc, y - e)) / (2 * h);
      }
      const TwistorPoint q = twistor_point_at({yt(0), yt(1), yt(2), yt(3)}, fc, Vec2(yt(4), yt(5)));
      const Mat6 jt = twistor_acs(chart, q, 1);
      const Mat6 jp = product_twistor_acs(t, p, 1);
      INFO(name);
      CHECK(max_abs(jt * d - d * jp) < 1e-6);
    }
  }
}
