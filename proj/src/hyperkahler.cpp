#include "twistor/hyperkahler.hpp"

#include <cmath>
#include <random>

#include "twistor/errors.hpp"

namespace twistor {

namespace {

Mat4 coordinate_complex_structure() {
  Mat4 s = Mat4::Zero();
  s(1, 0) = 1.0;
  s(0, 1) = -1.0;
  s(3, 2) = 1.0;
  s(2, 3) = -1.0;
  return s;
}

// Re and Im of dz1 ^ dz2.
std::array<Mat4, 2> raw_holomorphic_form() {
  Mat4 re = Mat4::Zero(), im = Mat4::Zero();
  re(0, 2) = 1.0;
  re(1, 3) = -1.0;
  im(0, 3) = 1.0;
  im(1, 2) = 1.0;
  re -= Mat4(re.transpose());
  im -= Mat4(im.transpose());
  return {re, im};
}

Mat4 metric_at(const MetricChart& chart, const Point& x) {
  return metric_values(metric_jet(chart, x));
}

Point shifted(const Point& x, int k, double h) {
  Point y = x;
  y[k] += h;
  return y;
}

}  // namespace

std::array<Mat4, 2> HyperkaehlerTriple::Omega(const Point& x) const {
  const Mat4 g = metric_at(chart_, x);
  const Mat4 g_inv = g.inverse();
  std::array<Mat4, 2> f = raw_holomorphic_form();
  const Mat4 raised = -g_inv * f[0];
  const double c = std::sqrt(-(raised * raised).trace() / 4.0);
  f[0] /= c;
  f[1] /= c;
  return f;
}

std::array<Mat4, 3> HyperkaehlerTriple::I(const Point& x) const {
  const Mat4 g_inv = metric_at(chart_, x).inverse();
  const std::array<Mat4, 2> f = Omega(x);
  return {coordinate_complex_structure(), Mat4(-g_inv * f[0]), Mat4(-g_inv * f[1])};
}

std::array<Mat4, 3> HyperkaehlerTriple::omega(const Point& x) const {
  const Mat4 g = metric_at(chart_, x);
  const std::array<Mat4, 2> f = Omega(x);
  return {Mat4(coordinate_complex_structure().transpose() * g), f[0], f[1]};
}

Mat4 HyperkaehlerTriple::I_a(const Point& x, const Vec3& a) const {
  if (std::abs(a.norm() - 1.0) > 1e-9) throw ArgumentError("I_a: a must be a unit vector");
  const std::array<Mat4, 3> i = I(x);
  return a(0) * i[0] + a(1) * i[1] + a(2) * i[2];
}

Mat3 HyperkaehlerTriple::fibre_rotation(const Point& x) const {
  const OrthoFrame fr = ortho_frame(metric_at(chart_, x), chart_.orientation);
  const std::array<Mat4, 3> w = omega(x);
  Mat3 r;
  for (int a = 0; a < 3; ++a) {
    r.col(a) = self_dual_part(fr.frame.transpose() * w[a] * fr.frame) / std::sqrt(2.0);
  }
  return r;
}

TripleCheck check_triple(const HyperkaehlerTriple& triple, const std::vector<Point>& samples,
                         double h) {
  TripleCheck out;
  const MetricChart& chart = triple.chart();
  for (const Point& x : samples) {
    const Mat4 g = metric_at(chart, x);
    const std::array<Mat4, 3> I = triple.I(x);
    const Mat4 id = Mat4::Identity();
    for (int a = 0; a < 3; ++a) {
      const int b = (a + 1) % 3, c = (a + 2) % 3;
      out.quaternion = std::max(out.quaternion, (I[a] * I[a] + id).cwiseAbs().maxCoeff());
      out.quaternion = std::max(out.quaternion, (I[a] * I[b] - I[c]).cwiseAbs().maxCoeff());
      out.orthogonality =
          std::max(out.orthogonality, (I[a].transpose() * g * I[a] - g).cwiseAbs().maxCoeff());
    }

    std::array<std::array<Mat4, 3>, 4> d_omega, d_I;
    for (int k = 0; k < kDim; ++k) {
      const auto wp = triple.omega(shifted(x, k, h)), wm = triple.omega(shifted(x, k, -h));
      const auto ip = triple.I(shifted(x, k, h)), im = triple.I(shifted(x, k, -h));
      for (int a = 0; a < 3; ++a) {
        d_omega[k][a] = (wp[a] - wm[a]) / (2.0 * h);
        d_I[k][a] = (ip[a] - im[a]) / (2.0 * h);
      }
    }
    for (int a = 0; a < 3; ++a) {
      for (int i = 0; i < kDim; ++i)
        for (int j = i + 1; j < kDim; ++j)
          for (int k = j + 1; k < kDim; ++k) {
            const double d = d_omega[i][a](j, k) + d_omega[j][a](k, i) + d_omega[k][a](i, j);
            out.closedness = std::max(out.closedness, std::abs(d));
          }
    }

    const std::array<Mat4, 4> gamma = christoffel_symbols(chart, x);
    for (int k = 0; k < kDim; ++k) {
      Mat4 gk;  // gk(i, j) = Gamma^i_kj
      for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j) gk(i, j) = gamma[i](k, j);
      for (int a = 0; a < 3; ++a) {
        const Mat4 nabla = d_I[k][a] + gk * I[a] - I[a] * gk;
        out.parallel = std::max(out.parallel, nabla.cwiseAbs().maxCoeff());
      }
    }
    ++out.samples;
  }
  return out;
}

HyperkaehlerTriple hk_triple(const MetricChart& chart) {
  HyperkaehlerTriple triple(chart);
  std::mt19937_64 rng(2024);
  std::vector<Point> samples;
  for (int i = 0; i < 8; ++i) samples.push_back(chart.domain.sample(rng));
  const TripleCheck c = check_triple(triple, samples);
  if (!c.passed(1e-8, 1e-5)) {
    throw ValidityError("chart '" + chart.name + "' is not hyperkaehler (max |nabla I| = " +
                        std::to_string(c.parallel) + ")");
  }
  return triple;
}

Mat6 product_twistor_acs(const HyperkaehlerTriple& triple, const TwistorPoint& p, int sign) {
  if (sign != 1 && sign != -1) throw ArgumentError("product_twistor_acs: sign must be +1 or -1");
  const Vec3 a = theta_from_zeta(p.chart, p.zeta);
  Mat6 j = Mat6::Zero();
  j.topLeftCorner<4, 4>() = sign * triple.I_a(p.x, a);
  j(5, 4) = 1.0;
  j(4, 5) = -1.0;
  return j;
}

Vec6 product_to_twistor(const HyperkaehlerTriple& triple, FibreChart chart, const Vec6& y) {
  const Point x{y(0), y(1), y(2), y(3)};
  const Vec3 a = theta_from_zeta(chart, Vec2(y(4), y(5)));
  const Vec3 theta = (triple.fibre_rotation(x) * a).normalized();
  const Vec2 z = zeta_from_theta(chart, theta);
  Vec6 out = y;
  out(4) = z(0);
  out(5) = z(1);
  return out;
}

}  // namespace twistor
