#include <cmath>
#include <random>

#include "brute_force_margin.hpp"
#include "doctest.h"
#include "twistor/taming.hpp"

using namespace twistor;

namespace {

Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat3 m;
  for (int i = 0; i < 9; ++i) m(i) = n(rng);
  Eigen::HouseholderQR<Mat3> qr(m);
  Mat3 q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

Mat3 random_sym(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat3 m;
  for (int i = 0; i < 9; ++i) m(i) = n(rng);
  return 0.5 * (m + m.transpose());
}

Mat3 random_mat(std::mt19937_64& rng, double s) {
  std::normal_distribution<double> n(0.0, s);
  Mat3 m;
  for (int i = 0; i < 9; ++i) m(i) = n(rng);
  return m;
}


}  // namespace

TEST_CASE("margin closed forms") {
  MarginResult r = taming_margin(Mat3::Identity(), Mat3::Zero());
  CHECK(r.margin == doctest::Approx(1.0));
  CHECK(r.argmin.norm() == doctest::Approx(1.0));

  r = taming_margin(Mat3::Zero(), Mat3::Zero());
  CHECK(r.margin == 0.0);

  Mat3 B = Mat3::Zero();
  B(0, 0) = 2.0;
  r = taming_margin(Mat3::Identity(), B);
  CHECK(r.margin == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(std::abs(r.argmin(0)) - 1.0) < 1e-6);
}

TEST_CASE("classification of catalog points") {
  TamingVerdict v = classify(curvature_blocks(catalog("round-s4"), {0, 0, 0, 0}));
  CHECK(v.cls == TamingClass::TamedJPlus);
  CHECK(v.margin == doctest::Approx(1.0));
  CHECK(v.detA == doctest::Approx(1.0));

  v = classify(curvature_blocks(catalog("hyperbolic-h4"), {0, 0, 0, 0}));
  CHECK(v.cls == TamingClass::TamedJMinus);
  CHECK(v.margin == doctest::Approx(1.0));
  CHECK(v.detA == doctest::Approx(-1.0));

  v = classify(curvature_blocks(catalog("eguchi-hanson"), {2, 0, 0, 0}));
  CHECK(v.cls == TamingClass::NotTamed);
  CHECK(std::abs(v.margin) < 1e-6);

  v = classify(curvature_blocks(catalog("complex-hyperbolic-ch2"), {0.1, 0.2, 0.3, 0.1}));
  CHECK(v.cls == TamingClass::TamedJMinus);

  v = classify(curvature_blocks(catalog("flat"), {0, 0, 0, 0}));
  CHECK(v.cls == TamingClass::NotTamed);
  CHECK(v.degenerate);

  // Kaehler in the complex orientation: A has rank one, not tamed.
  v = classify(curvature_blocks(catalog("fubini-study-cp2"), {0.1, 0.2, 0.3, 0.1}));
  CHECK(v.cls == TamingClass::NotTamed);
}

TEST_CASE("pinching") {
  PinchingVerdict p = pinching_verdict(catalog("round-s4"), {0, 0, 0, 0});
  CHECK(p.ratio == doctest::Approx(1.0));
  CHECK(p.two_fifths_pinched);
  p = pinching_verdict(catalog("s2xs2"), {0.1, 0, 0, 0.2});
  CHECK(std::abs(p.kmin) < 1e-6);
  CHECK_FALSE(p.two_fifths_pinched);
  p = pinching_verdict(catalog("hyperbolic-h4"), {0, 0, 0, 0});
  CHECK(p.ratio == doctest::Approx(1.0));
  CHECK(p.two_fifths_pinched);
}

TEST_CASE("region scans") {
  GridSpec g;
  g.half_width = 0.25;
  g.n = 4;
  const auto pts = grid_points(g);
  CHECK(pts.size() == 256);
  RegionReport r = region_scan(catalog("round-s4"), pts);
  CHECK(r.region == RegionClass::TamedJPlus);
  CHECK(std::abs(r.min_margin - 1.0) < 1e-8);
  CHECK(r.n_errors == 0);

  GridSpec ann;
  ann.half_width = 3.0;
  ann.n = 5;
  ann.r_min = 1.2;
  ann.r_max = 4.0;
  r = region_scan(catalog("eguchi-hanson"), grid_points(ann));
  CHECK(r.region == RegionClass::Untamed);
  CHECK(std::abs(r.min_margin) < 1e-6);

  r = region_scan(catalog("flat"), pts);
  CHECK(r.region == RegionClass::Untamed);
  CHECK(r.min_margin == 0.0);

  // Points outside the chart are reported, not fatal.
  std::vector<Point> mixed = {{0, 0, 0, 0}, {0.95, 0, 0, 0}};
  r = region_scan(catalog("hyperbolic-h4"), mixed);
  CHECK(r.n_errors == 1);
  CHECK_FALSE(r.points[1].error.empty());
  CHECK(r.region == RegionClass::TamedJMinus);
}

TEST_CASE("parallel and serial scans agree") {
  GridSpec g;
  g.half_width = 0.3;
  g.n = 3;
  const auto pts = grid_points(g);
  const RegionReport a = region_scan(catalog("fubini-study-cp2"), pts);
  const RegionReport b = region_scan_serial(catalog("fubini-study-cp2"), pts);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].verdict->margin == b.points[i].verdict->margin);
  }
  CHECK(a.min_margin == b.min_margin);
}

TEST_CASE("invariance and covariance of the margin") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 50; ++t) {
    const Mat3 A = random_sym(rng), B = random_mat(rng, 0.5);
    const Mat3 Q = random_rotation(rng);
    const MarginResult m = taming_margin(A, B);
    const MarginResult mq = taming_margin(Q * A * Q.transpose(), Q * B * Q.transpose());
    CHECK(std::abs(m.margin - mq.margin) < 1e-9);
    const Vec3 mapped = Q * m.argmin;
    const double val = std::abs(mapped.dot(Q * A * Q.transpose() * mapped)) -
                       (Q * B * Q.transpose() * mapped).norm();
    CHECK(std::abs(val - mq.margin) < 1e-9);
    const double lam = 0.3 + t * 0.1;
    const MarginResult ms = taming_margin(lam * A, lam * B);
    CHECK(std::abs(ms.margin - lam * m.margin) < 1e-12 * std::max(1.0, std::abs(lam * m.margin)) + 1e-12);
    const MarginResult mn = taming_margin(A, B);
    CHECK(mn.margin == m.margin);
  }
}

TEST_CASE("lattice with polish matches a dense scan") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 100; ++t) {
    const Mat3 A = random_sym(rng), B = random_mat(rng, 0.7);
    const MarginResult m = taming_margin(A, B);
    const MarginResult dense = taming_margin_dense(A, B, 200000);
    CHECK(m.margin <= dense.margin + 1e-12);
    const double bf = testing::brute_force_margin(A, B);
    INFO("polished " << m.margin << " brute " << bf);
    CHECK(std::abs(m.margin - bf) < 1e-4);
  }
}

TEST_CASE("positive pinching implies taming on catalog samples") {
  std::mt19937_64 rng(31);
  for (const auto& name : catalog_names()) {
    const MetricChart chart = catalog(name);
    for (int s = 0; s < 10; ++s) {
      const CurvatureBlocks b = curvature_blocks(chart, chart.domain.sample(rng));
      const PinchingVerdict p = pinching_verdict(b);
      if (!p.two_fifths_pinched) continue;
      const TamingVerdict v = classify(b);
      CHECK(v.margin > 0.0);
      CHECK(v.cls == (p.kmin > 0 ? TamingClass::TamedJPlus : TamingClass::TamedJMinus));
    }
  }
}
