#include <cmath>

#include "twistor/curvature.hpp"
#include "twistor/errors.hpp"
#include "twistor/metric.hpp"

namespace twistor {

namespace {

using Coords = std::array<Jet2, kDim>;

Jet2 norm2(const Coords& x, int first, int count) {
  Jet2 s(0.0);
  for (int i = first; i < first + count; ++i) s += x[i] * x[i];
  return s;
}

MetricJet conformally_flat(const Jet2& factor) {
  MetricJet g{};
  for (int i = 0; i < kDim; ++i) g[sym_index(i, i)] = factor;
  return g;
}

// U(2)-invariant Kaehler metric from a potential K(u), u = |z1|^2 + |z2|^2,
// given K'(u) and K''(u): h_{a b*} = K' delta_ab + K'' conj(z_a) z_b.
template <typename D1, typename D2>
MetricJet radial_kaehler(const Coords& x, D1 first, D2 second) {
  const Jet2 u = norm2(x, 0, 4);
  const Jet2 k1 = first(u);
  const Jet2 k2 = second(u);
  HermitianJet h;
  h.h11 = k1 + k2 * (x[0] * x[0] + x[1] * x[1]);
  h.h22 = k1 + k2 * (x[2] * x[2] + x[3] * x[3]);
  h.re12 = k2 * (x[0] * x[2] + x[1] * x[3]);
  h.im12 = k2 * (x[0] * x[3] - x[1] * x[2]);
  return real_metric_from_hermitian(h);
}

MetricChart make(std::string name, Domain domain, MetricEvaluator eval,
                 int orientation = +1) {
  MetricChart c;
  c.name = std::move(name);
  c.domain = domain;
  c.evaluator = std::move(eval);
  c.orientation = orientation;
  return c;
}

constexpr double kEhParameter = 1.0;

}  // namespace

HermitianJet eguchi_hanson_bolt_hermitian(const Coords& x, double a) {
  const double a2 = a * a;
  const Jet2 z2 = x[0] * x[0] + x[1] * x[1];
  const Jet2 w2 = x[2] * x[2] + x[3] * x[3];
  const Jet2 L = 1.0 + z2;
  const Jet2 v = w2 * L * L;
  const Jet2 s = sqrt(v + a2 * a2);
  const Jet2 as = a2 + s;
  const Jet2 p1 = reciprocal(2.0 * as);
  const Jet2 p2 = -reciprocal(4.0 * s * as * as);
  const Jet2 inv4s = reciprocal(4.0 * s);
  HermitianJet h;
  h.h11 = 2.0 * w2 * (L + z2) * p1 + 4.0 * w2 * w2 * L * L * z2 * p2 +
          a2 * reciprocal(L * L);
  h.h22 = L * L * inv4s;
  const Jet2 c = 2.0 * L * inv4s;  // h_{z w*} = 2 L Q w conj(z), Q = 1/(4s)
  h.re12 = c * (x[0] * x[2] + x[1] * x[3]);
  h.im12 = c * (x[0] * x[3] - x[1] * x[2]);
  return h;
}

Point bolt_transition(const Point& x) {
  // z' = 1/z, w' = z^2 w.
  const double zr = x[0], zi = x[1], wr = x[2], wi = x[3];
  const double d = zr * zr + zi * zi;
  const double z2r = zr * zr - zi * zi, z2i = 2.0 * zr * zi;
  return {zr / d, -zi / d, z2r * wr - z2i * wi, z2r * wi + z2i * wr};
}

std::vector<std::string> catalog_names() {
  return {"flat",
          "round-s4",
          "hyperbolic-h4",
          "fubini-study-cp2",
          "complex-hyperbolic-ch2",
          "s2xs2",
          "eguchi-hanson",
          "eguchi-hanson-bolt"};
}

MetricChart catalog(const std::string& name) {
  if (name == "flat") {
    return make(name, Domain::box(2.0, 0.1), [](const Point&) {
      return conformally_flat(Jet2(1.0));
    });
  }
  if (name == "round-s4") {
    return make(name, Domain::ball(2.0, 0.1), [](const Point& p) {
      const auto x = jet_point(p);
      const Jet2 f = 2.0 * reciprocal(1.0 + norm2(x, 0, 4));
      return conformally_flat(f * f);
    });
  }
  if (name == "hyperbolic-h4") {
    return make(name, Domain::ball(1.0, 0.1), [](const Point& p) {
      const auto x = jet_point(p);
      const Jet2 f = 2.0 * reciprocal(1.0 - norm2(x, 0, 4));
      return conformally_flat(f * f);
    });
  }
  if (name == "fubini-study-cp2") {
    // K = log(1 + u)
    return make(name, Domain::ball(2.0, 0.1), [](const Point& p) {
      return radial_kaehler(
          jet_point(p), [](const Jet2& u) { return reciprocal(1.0 + u); },
          [](const Jet2& u) { return -reciprocal((1.0 + u) * (1.0 + u)); });
    });
  }
  if (name == "complex-hyperbolic-ch2") {
    // K = -log(1 - u), non-complex orientation.
    return make(
        name, Domain::ball(1.0, 0.1),
        [](const Point& p) {
          return radial_kaehler(
              jet_point(p), [](const Jet2& u) { return reciprocal(1.0 - u); },
              [](const Jet2& u) { return reciprocal((1.0 - u) * (1.0 - u)); });
        },
        -1);
  }
  if (name == "s2xs2") {
    return make(name, Domain::box(2.0, 0.1), [](const Point& p) {
      const auto x = jet_point(p);
      const Jet2 f1 = 2.0 * reciprocal(1.0 + norm2(x, 0, 2));
      const Jet2 f2 = 2.0 * reciprocal(1.0 + norm2(x, 2, 2));
      MetricJet g{};
      g[sym_index(0, 0)] = f1 * f1;
      g[sym_index(1, 1)] = f1 * f1;
      g[sym_index(2, 2)] = f2 * f2;
      g[sym_index(3, 3)] = f2 * f2;
      return g;
    });
  }
  if (name == "eguchi-hanson") {
    // Calabi potential with K'(u) = sqrt(u^2 + a^4) / u.
    return make(name, Domain::shell(0.5, 6.0, 0.1), [](const Point& p) {
      constexpr double a4 = kEhParameter * kEhParameter * kEhParameter * kEhParameter;
      return radial_kaehler(
          jet_point(p),
          [](const Jet2& u) { return sqrt(u * u + a4) / u; },
          [](const Jet2& u) { return -a4 * reciprocal(sqrt(u * u + a4) * u * u); });
    });
  }
  if (name == "eguchi-hanson-bolt") {
    return make(name, Domain::bidisc(1.6, 1.2, 0.1), [](const Point& p) {
      return real_metric_from_hermitian(
          eguchi_hanson_bolt_hermitian(jet_point(p), kEhParameter));
    });
  }
  throw LookupError("unknown catalog metric '" + name + "'");
}

SelfCheckReport eh_selfcheck(const MetricChart& chart,
                             const std::vector<Point>& samples) {
  SelfCheckReport rep;
  for (const Point& x : samples) {
    const CurvatureBlocks b = curvature_blocks(chart, x);
    rep.max_ricci = std::max(rep.max_ricci, b.ricci.norm());
    rep.max_a = std::max(rep.max_a, b.A.norm());
    rep.max_b = std::max(rep.max_b, b.B.norm());
    ++rep.samples;
  }
  return rep;
}

}  // namespace twistor
