#include <cmath>
#include <sstream>

#include "twistor/errors.hpp"
#include "twistor/metric.hpp"

namespace twistor {

Domain Domain::box(double half_width, double margin) {
  Domain d;
  d.kind_ = Kind::Box;
  d.a_ = half_width;
  d.margin_ = margin;
  return d;
}

Domain Domain::ball(double radius, double margin) {
  Domain d;
  d.kind_ = Kind::Ball;
  d.a_ = radius;
  d.margin_ = margin;
  return d;
}

Domain Domain::shell(double r_min, double r_max, double margin) {
  Domain d;
  d.kind_ = Kind::Shell;
  d.a_ = r_min;
  d.b_ = r_max;
  d.margin_ = margin;
  return d;
}

Domain Domain::bidisc(double r_first, double r_second, double margin) {
  Domain d;
  d.kind_ = Kind::Bidisc;
  d.a_ = r_first;
  d.b_ = r_second;
  d.margin_ = margin;
  return d;
}

bool Domain::inside(const Point& x, double shrink) const {
  for (double c : x) {
    if (!std::isfinite(c)) return false;
  }
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
  switch (kind_) {
    case Kind::Box:
      for (double c : x) {
        if (std::abs(c) >= a_ - shrink) return false;
      }
      return true;
    case Kind::Ball:
      return r < a_ - shrink;
    case Kind::Shell:
      return r > a_ + shrink && r < b_ - shrink;
    case Kind::Bidisc:
      return std::hypot(x[0], x[1]) < a_ - shrink &&
             std::hypot(x[2], x[3]) < b_ - shrink;
  }
  return false;
}

bool Domain::contains(const Point& x) const { return inside(x, 0.0); }
bool Domain::admissible(const Point& x) const { return inside(x, margin_ * 0.999999); }

Point Domain::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto direction = [&](int n) {
    std::array<double, 4> v{};
    double s = 0.0;
    while (s < 1e-12) {
      s = 0.0;
      for (int i = 0; i < n; ++i) {
        v[i] = normal(rng);
        s += v[i] * v[i];
      }
    }
    s = std::sqrt(s);
    for (int i = 0; i < n; ++i) v[i] /= s;
    return v;
  };
  Point x{};
  switch (kind_) {
    case Kind::Box: {
      const double w = a_ - margin_;
      for (auto& c : x) c = w * (2.0 * unit(rng) - 1.0);
      break;
    }
    case Kind::Ball: {
      const auto d = direction(4);
      const double r = (a_ - margin_) * std::pow(unit(rng), 0.25);
      for (int i = 0; i < 4; ++i) x[i] = r * d[i];
      break;
    }
    case Kind::Shell: {
      const auto d = direction(4);
      const double lo = a_ + margin_, hi = b_ - margin_;
      const double r = lo + (hi - lo) * unit(rng);
      for (int i = 0; i < 4; ++i) x[i] = r * d[i];
      break;
    }
    case Kind::Bidisc: {
      const double r1 = (a_ - margin_) * std::sqrt(unit(rng));
      const double r2 = (b_ - margin_) * std::sqrt(unit(rng));
      const double p1 = 2.0 * M_PI * unit(rng), p2 = 2.0 * M_PI * unit(rng);
      x = {r1 * std::cos(p1), r1 * std::sin(p1), r2 * std::cos(p2), r2 * std::sin(p2)};
      break;
    }
  }
  return x;
}

std::string Domain::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Box: os << "box |x_i| < " << a_; break;
    case Kind::Ball: os << "ball |x| < " << a_; break;
    case Kind::Shell: os << "shell " << a_ << " < |x| < " << b_; break;
    case Kind::Bidisc: os << "bidisc |z| < " << a_ << ", |w| < " << b_; break;
  }
  os << " (margin " << margin_ << ")";
  return os.str();
}

Mat4 metric_values(const MetricJet& g) {
  Mat4 m;
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) m(i, j) = g[sym_index(i, j)].value;
  }
  return m;
}

bool positive_definite(const Mat4& g) {
  Eigen::LLT<Mat4> llt(g);
  return llt.info() == Eigen::Success && g.allFinite();
}

namespace {

std::string format_point(const Point& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << x[0] << ", " << x[1] << ", " << x[2] << ", " << x[3] << ")";
  return os.str();
}

}  // namespace

MetricJet metric_jet(const MetricChart& chart, const Point& x) {
  if (!chart.domain.contains(x)) {
    throw DomainError("point " + format_point(x) + " outside domain of chart '" +
                      chart.name + "' (" + chart.domain.describe() + ")");
  }
  MetricJet g = chart.evaluator(x);
  if (!positive_definite(metric_values(g))) {
    throw ValidityError("metric of chart '" + chart.name +
                        "' not positive definite at " + format_point(x));
  }
  return g;
}

MetricChart perturb(const PerturbationSpec& spec) {
  MetricChart out = spec.base;
  if (spec.t == 0.0) return out;
  std::ostringstream name;
  name.precision(17);
  name << spec.base.name << "+t*h(t=" << spec.t << ")";
  out.name = name.str();
  const MetricEvaluator base = spec.base.evaluator;
  const MetricEvaluator dir = spec.direction;
  const double t = spec.t;
  out.evaluator = [base, dir, t](const Point& x) {
    MetricJet g = base(x);
    const MetricJet h = dir(x);
    for (int k = 0; k < kSymSize; ++k) g[k] += t * h[k];
    return g;
  };
  return out;
}

MetricEvaluator diagonal_bump(const Point& center, double radius) {
  return [center, radius](const Point& x) {
    const auto xj = jet_point(x);
    Jet2 s2(0.0);
    for (int i = 0; i < kDim; ++i) {
      const Jet2 d = (xj[i] - center[i]) * (1.0 / radius);
      s2 += d * d;
    }
    MetricJet h{};
    if (s2.value < 1.0) {
      const Jet2 bump = exp(1.0 - reciprocal(1.0 - s2));
      for (int i = 0; i < kDim; ++i) h[sym_index(i, i)] = bump;
    }
    return h;
  };
}

MetricEvaluator conformal_metric(
    std::function<Jet2(const std::array<Jet2, kDim>&)> factor) {
  return [factor](const Point& x) {
    const Jet2 f = factor(jet_point(x));
    MetricJet g{};
    for (int i = 0; i < kDim; ++i) g[sym_index(i, i)] = f;
    return g;
  };
}

MetricJet real_metric_from_hermitian(const HermitianJet& h) {
  // Real coordinates (x0, x1) = (Re z1, Im z1), (x2, x3) = (Re z2, Im z2).
  MetricJet g{};
  g[sym_index(0, 0)] = h.h11;
  g[sym_index(1, 1)] = h.h11;
  g[sym_index(0, 1)] = Jet2(0.0);
  g[sym_index(2, 2)] = h.h22;
  g[sym_index(3, 3)] = h.h22;
  g[sym_index(2, 3)] = Jet2(0.0);
  // g(dx_a, dx_b) = Re h, g(dx_a, dy_b) = Im h, g(dy_a, dx_b) = -Im h.
  g[sym_index(0, 2)] = h.re12;
  g[sym_index(1, 3)] = h.re12;
  g[sym_index(0, 3)] = h.im12;
  g[sym_index(1, 2)] = -h.im12;
  return g;
}

}  // namespace twistor
