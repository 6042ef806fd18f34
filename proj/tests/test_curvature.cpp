#include <cmath>
#include <random>

#include "doctest.h"
#include "twistor/curvature.hpp"
#include "twistor/errors.hpp"

using namespace twistor;

namespace {

Mat3 trace_free(const Mat3& m) { return m - (m.trace() / 3.0) * Mat3::Identity(); }

}  // namespace

TEST_CASE("orthonormal frames") {
  OrthoFrame f = ortho_frame(Mat4::Identity(), 1);
  CHECK(f.coframe == Mat4::Identity());
  f = ortho_frame(4.0 * Mat4::Identity(), 1);
  CHECK(f.coframe.isApprox(2.0 * Mat4::Identity()));
  f = ortho_frame(Mat4::Identity(), -1);
  CHECK(f.coframe == Vec4(1, 1, 1, -1).asDiagonal().toDenseMatrix());
  CHECK(f.orientation_corrected);
  Mat4 bad = Mat4::Identity();
  bad(2, 2) = -1.0;
  CHECK_THROWS_AS(ortho_frame(bad, 1), ValidityError);

  std::mt19937_64 rng(2);
  for (const auto& name : catalog_names()) {
    const MetricChart chart = catalog(name);
    const Point x = chart.domain.sample(rng);
    const Mat4 g = metric_values(metric_jet(chart, x));
    const OrthoFrame of = ortho_frame(g, chart.orientation);
    CHECK((of.coframe * g.inverse() * of.coframe.transpose() - Mat4::Identity()).norm() < 1e-12);
    CHECK(of.frame.determinant() * chart.orientation > 0.0);
  }
}

TEST_CASE("space forms") {
  const RiemannTensor flat = riemann(catalog("flat"), {0.1, 0.2, 0.3, 0.4});
  for (double r : flat.r) CHECK(r == 0.0);

  const RiemannTensor s4 = riemann(catalog("round-s4"), {0, 0, 0, 0});
  const RiemannTensor h4 = riemann(catalog("hyperbolic-h4"), {0, 0, 0, 0});
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          const double e = (a == c && b == d ? 1.0 : 0.0) - (a == d && b == c ? 1.0 : 0.0);
          CHECK(std::abs(s4(a, b, c, d) - e) < 1e-10);
          CHECK(std::abs(h4(a, b, c, d) + e) < 1e-10);
        }

  const CurvatureBlocks bs = blocks(s4);
  CHECK((bs.A - Mat3::Identity()).norm() < 1e-10);
  CHECK((bs.C - Mat3::Identity()).norm() < 1e-10);
  CHECK(bs.B.norm() < 1e-10);
  CHECK(bs.scalar == doctest::Approx(12.0));
  CHECK((bs.A - bs.scalar / 12.0 * Mat3::Identity()).norm() < 1e-10);

  const CurvatureBlocks bh = blocks(h4);
  CHECK((bh.A + Mat3::Identity()).norm() < 1e-10);
  CHECK(bh.B.norm() < 1e-10);
  CHECK(bh.scalar == doctest::Approx(-12.0));
}

TEST_CASE("Eguchi-Hanson curvature lives in the anti-self-dual Weyl part") {
  const CurvatureBlocks b = curvature_blocks(catalog("eguchi-hanson"), {2, 0, 0, 0});
  CHECK(b.A.norm() < 1e-6);
  CHECK(b.B.norm() < 1e-6);
  CHECK(b.C.norm() > 1e-2);
}

TEST_CASE("Kaehler and product examples") {
  const CurvatureBlocks fs = curvature_blocks(catalog("fubini-study-cp2"), {0.3, -0.1, 0.2, 0.5});
  CHECK(fs.scalar == doctest::Approx(24.0));
  Mat3 expect = Mat3::Zero();
  expect(0, 0) = 6.0;
  CHECK((fs.A - expect).norm() < 1e-8);
  CHECK(fs.B.norm() < 1e-8);

  const CurvatureBlocks ch = curvature_blocks(catalog("complex-hyperbolic-ch2"), {0.3, -0.1, 0.2, 0.1});
  CHECK(ch.scalar < 0.0);
  CHECK((ch.A - ch.scalar / 12.0 * Mat3::Identity()).norm() < 1e-8);
  CHECK(ch.B.norm() < 1e-8);

  const CurvatureBlocks ss = curvature_blocks(catalog("s2xs2"), {0.3, 0.7, -0.4, 0.2});
  CHECK(ss.scalar == doctest::Approx(4.0));
  CHECK(ss.B.norm() < 1e-8);
}

TEST_CASE("identities at random points of every chart") {
  std::mt19937_64 rng(17);
  for (const auto& name : catalog_names()) {
    const MetricChart chart = catalog(name);
    for (int s = 0; s < 50; ++s) {
      const Point x = chart.domain.sample(rng);
      const RiemannTensor rm = riemann(chart, x);
      const CurvatureBlocks b = blocks(rm);
      const double scale = std::max(1.0, b.R6.norm());
      INFO(name);
      CHECK(std::abs(b.A.trace() - b.scalar / 4.0) < 1e-8 * scale);
      CHECK(std::abs(b.C.trace() - b.scalar / 4.0) < 1e-8 * scale);
      CHECK((b.R6 - b.R6.transpose()).norm() < 1e-10 * scale);
      double bianchi = 0.0, sym = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int bb = 0; bb < 4; ++bb)
          for (int c = 0; c < 4; ++c)
            for (int d = 0; d < 4; ++d) {
              bianchi = std::max(bianchi, std::abs(rm(a, bb, c, d) + rm(a, c, d, bb) + rm(a, d, bb, c)));
              sym = std::max(sym, std::abs(rm(a, bb, c, d) + rm(bb, a, c, d)));
              sym = std::max(sym, std::abs(rm(a, bb, c, d) - rm(c, d, a, bb)));
            }
      CHECK(bianchi < 1e-9 * scale);
      CHECK(sym < 1e-9 * scale);
      // All catalog entries are Einstein.
      CHECK(b.B.norm() < 1e-7 * scale);
      const Mat4 tf = b.ricci - b.scalar / 4.0 * Mat4::Identity();
      CHECK(tf.norm() < 1e-7 * scale);
      if (name == "round-s4" || name == "hyperbolic-h4") {
        CHECK(trace_free(b.A).norm() < 1e-8);
        CHECK(trace_free(b.C).norm() < 1e-8);
      }
    }
  }
}

TEST_CASE("B vanishes exactly when the trace-free Ricci does") {
  PerturbationSpec spec{catalog("flat"), diagonal_bump({0, 0, 0, 0}, 1.0), 0.2};
  const MetricChart bumped = perturb(spec);
  const CurvatureBlocks b = curvature_blocks(bumped, {0.3, 0.1, -0.2, 0.15});
  const Mat4 tf = b.ricci - b.scalar / 4.0 * Mat4::Identity();
  CHECK(b.B.norm() > 1e-4);
  CHECK(tf.norm() > 1e-4);
}

TEST_CASE("orientation reversal exchanges A and C") {
  std::mt19937_64 rng(4);
  for (const char* name : {"fubini-study-cp2", "eguchi-hanson", "s2xs2"}) {
    MetricChart plus = catalog(name);
    MetricChart minus = plus;
    minus.orientation = -plus.orientation;
    const Point x = plus.domain.sample(rng);
    const CurvatureBlocks bp = curvature_blocks(plus, x);
    const CurvatureBlocks bm = curvature_blocks(minus, x);
    // Flipping e3 maps sigma_i^- to sigma_i^+ for i = 0, 1 and to -sigma_2^+.
    const Mat3 D = Vec3(1, 1, -1).asDiagonal();
    CHECK((bm.A - D * bp.C * D).norm() < 1e-10 * std::max(1.0, bp.C.norm()));
    CHECK((bm.C - D * bp.A * D).norm() < 1e-10 * std::max(1.0, bp.A.norm()));
  }
}

TEST_CASE("sectional curvature range") {
  auto [a, b] = sectional_range(catalog("round-s4"), {0, 0, 0, 0});
  CHECK(std::abs(a - 1.0) < 1e-8);
  CHECK(std::abs(b - 1.0) < 1e-8);
  std::tie(a, b) = sectional_range(catalog("flat"), {0, 0, 0, 0});
  CHECK(a == 0.0);
  CHECK(b == 0.0);
  std::tie(a, b) = sectional_range(catalog("s2xs2"), {0.2, 0.1, -0.3, 0.4});
  CHECK(std::abs(a) < 1e-6);
  CHECK(std::abs(b - 1.0) < 1e-6);
  std::tie(a, b) = sectional_range(catalog("fubini-study-cp2"), {0.2, 0.1, -0.3, 0.4});
  CHECK(std::abs(a - 1.0) < 1e-6);
  CHECK(std::abs(b - 4.0) < 1e-6);
  CHECK_THROWS_AS(sectional_range(catalog("flat"), {0, 0, 0, 0}, 10), ArgumentError);
}

TEST_CASE("sectional curvature of the coordinate planes") {
  std::mt19937_64 rng(8);
  const MetricChart chart = catalog("fubini-study-cp2");
  const Point x = chart.domain.sample(rng);
  const RiemannTensor rm = riemann(chart, x);
  const auto [kmin, kmax] = sectional_range(blocks(rm), 512);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      CHECK(rm(a, b, a, b) >= kmin - 1e-9);
      CHECK(rm(a, b, a, b) <= kmax + 1e-9);
    }
}
