#include "twistor/continuation.hpp"

#include <cmath>
#include <cstdio>
#include <memory>

#include "twistor/errors.hpp"
#include "twistor/twistor_space.hpp"

namespace twistor {

namespace {

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Point base_point(const Vec6& y) { return {y(0), y(1), y(2), y(3)}; }

std::array<Mat6, 6> product_christoffel(const MetricChart& chart, const Vec6& y) {
  std::array<Mat6, 6> gamma;
  for (auto& m : gamma) m.setZero();
  const std::array<Mat4, 4> gx = christoffel_symbols(chart, base_point(y));
  for (int k = 0; k < 4; ++k) gamma[k].topLeftCorner<4, 4>() = gx[k];
  // Round metric lambda^2 |d zeta|^2, lambda = 2 / (1 + |zeta|^2).
  const double q = 1.0 + y(4) * y(4) + y(5) * y(5);
  const double df[2] = {-2.0 * y(4) / q, -2.0 * y(5) / q};
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        gamma[4 + k](4 + i, 4 + j) =
            (i == k ? df[j] : 0.0) + (j == k ? df[i] : 0.0) - (i == j ? df[k] : 0.0);
      }
  return gamma;
}

Vec6 bolt_chart_change(const Vec6& y) {
  const Point x = bolt_transition(base_point(y));
  Vec6 out;
  out << x[0], x[1], x[2], x[3], -y(4), -y(5);
  return out;
}

void put_complex(Mat6& m, int row, int col, std::complex<double> a) {
  m(row, col) = a.real();
  m(row, col + 1) = -a.imag();
  m(row + 1, col) = a.imag();
  m(row + 1, col + 1) = a.real();
}

Mat6 bolt_chart_change_jacobian(const Vec6& y) {
  const std::complex<double> z(y(0), y(1)), w(y(2), y(3));
  Mat6 d = Mat6::Zero();
  put_complex(d, 0, 0, -1.0 / (z * z));
  put_complex(d, 2, 0, 2.0 * z * w);
  put_complex(d, 2, 2, z * z);
  d(4, 4) = -1.0;
  d(5, 5) = -1.0;
  return d;
}

TargetModel bolt_frame_model(const std::string& name) {
  auto chart = std::make_shared<MetricChart>(catalog("eguchi-hanson-bolt"));
  TargetModel m;
  m.name = name;
  m.christoffel = [chart](int, const Vec6& y) { return product_christoffel(*chart, y); };
  m.transition = bolt_chart_change;
  m.transition_jacobian = bolt_chart_change_jacobian;
  return m;
}

// Product coordinates of g to twistor coordinates of g'.
struct ProductToTwistor {
  std::shared_ptr<const HyperkaehlerTriple> triple;
  MetricChart g, gp;

  Vec3 theta(const Vec6& y) const {
    const Point x = base_point(y);
    const Vec3 a = theta_from_zeta(FibreChart::Equatorial, Vec2(y(4), y(5)));
    const Vec3 th = (triple->fibre_rotation(x) * a).normalized();
    return comparison_map(g, gp, x, th).theta;
  }

  Vec6 map(const Vec6& y, FibreChart fc) const {
    const Vec2 z = zeta_from_theta(fc, theta(y));
    Vec6 out = y;
    out(4) = z(0);
    out(5) = z(1);
    return out;
  }

  FibreChart chart_for(const Vec6& y) const {
    const Vec3 th = theta(y);
    FibreChart best = FibreChart::North;
    double score = -2.0;
    for (FibreChart fc : {FibreChart::North, FibreChart::South, FibreChart::Equatorial}) {
      const double s = th.dot(fibre_chart_frame(fc).c);
      if (s > score) {
        score = s;
        best = fc;
      }
    }
    return best;
  }

  // Image point and Jacobian by central differences.
  std::pair<TwistorPoint, Mat6> pull(const Vec6& y) const {
    const FibreChart fc = chart_for(y);
    const double h = 1e-5;
    Mat6 d;
    for (int k = 0; k < 6; ++k) {
      Vec6 e = Vec6::Zero();
      e(k) = h;
      d.col(k) = (map(y + e, fc) - map(y - e, fc)) / (2.0 * h);
    }
    const Vec6 yt = map(y, fc);
    return {twistor_point_at(base_point(yt), fc, Vec2(yt(4), yt(5))), d};
  }
};

std::shared_ptr<ProductToTwistor> product_to_perturbed(double t, const MetricEvaluator& h) {
  auto p = std::make_shared<ProductToTwistor>();
  p->g = catalog("eguchi-hanson-bolt");
  p->triple = std::make_shared<HyperkaehlerTriple>(hk_triple(p->g));
  p->gp = perturbed_bolt(t, h);
  return p;
}

}  // namespace

TargetModel bolt_product_target(int sign) {
  if (sign != 1 && sign != -1) throw ArgumentError("bolt_product_target: sign must be +1 or -1");
  auto triple = std::make_shared<HyperkaehlerTriple>(hk_triple(catalog("eguchi-hanson-bolt")));
  TargetModel m = bolt_frame_model(sign > 0 ? "bolt-product-J+" : "bolt-product-J-");
  m.acs = [triple, sign](int, const Vec6& y) {
    return product_twistor_acs(
        *triple, twistor_point_at(base_point(y), FibreChart::Equatorial, Vec2(y(4), y(5))),
        sign);
  };
  return m;
}

DiscretizedSphereMap bolt_lift(int N) {
  if (N < 16) throw ArgumentError("bolt_lift: N must be at least 16");
  const DiscretizedSphereMap u = project_map(
      sphere_grid(N),
      [](int, double s, double t) {
        Vec6 y = Vec6::Zero();
        y(0) = s;
        y(1) = t;
        return y;
      },
      "");
  TargetModel frame = bolt_frame_model("bolt");
  const std::array<int, 3> w = seam_windings(u, frame);
  DiscretizedSphereMap out = with_twist(u, w);
  out.homotopy_class_tag = "eguchi-hanson-bolt:zero-section:a=(1,0,0):seam=(" +
                           std::to_string(w[0]) + "," + std::to_string(w[1]) + "," +
                           std::to_string(w[2]) + ")";
  return out;
}

MetricEvaluator bolt_perturbation() {
  return [](const Point& x) {
    const auto xj = jet_point(x);
    const Jet2 zz = xj[0] * xj[0] + xj[1] * xj[1];
    const Jet2 ww = xj[2] * xj[2] + xj[3] * xj[3];
    const Jet2 l = 1.0 + zz;
    const Jet2 v = ww * l * l;
    const Jet2 decay = exp(-2.0 * v);
    const Jet2 inv_l2 = reciprocal(l * l);
    const std::array<Jet2, 4> dp = {2.0 * xj[0] * inv_l2, 2.0 * xj[1] * inv_l2, Jet2(0.0),
                                    Jet2(0.0)};
    MetricJet h{};
    for (int i = 0; i < kDim; ++i)
      for (int j = i; j < kDim; ++j) h[sym_index(i, j)] = decay * dp[i] * dp[j];
    return h;
  };
}

MetricChart perturbed_bolt(double t, const MetricEvaluator& h) {
  PerturbationSpec spec;
  spec.base = catalog("eguchi-hanson-bolt");
  spec.direction = h;
  spec.t = t;
  return perturb(spec);
}

TargetModel perturbed_bolt_target(double t, int sign, const MetricEvaluator& h) {
  if (sign != 1 && sign != -1) throw ArgumentError("perturbed_bolt_target: sign must be +1 or -1");
  auto p = product_to_perturbed(t, h);
  TargetModel m = bolt_frame_model("bolt-perturbed-t=" + std::to_string(t));
  m.acs = [p, sign](int, const Vec6& y) {
    const auto [q, d] = p->pull(y);
    const Mat6 j = twistor_acs(p->gp, q, sign);
    return Mat6(d.inverse() * j * d);
  };
  return m;
}

std::function<Mat6(int, const Vec6&)> perturbed_reznikov_form(double t,
                                                              const MetricEvaluator& h) {
  auto p = product_to_perturbed(t, h);
  return [p](int, const Vec6& y) {
    const auto [q, d] = p->pull(y);
    return Mat6(d.transpose() * reznikov_matrix(p->gp, q) * d);
  };
}

ContinuationResult newton_continue(const DiscretizedSphereMap& u0, const TargetModel& target,
                                   int max_iter, double tol, int steps) {
  ContinuationResult res;
  res.map = u0;
  try {
    CRResidual r = cr_residual(res.map, target);
    const double initial = r.discrete_sup;
    res.residual_trace.push_back(initial);
    while (true) {
      if (r.discrete_sup < tol) {
        res.converged = true;
        res.message = "converged";
        return res;
      }
      if (res.iterations >= max_iter) {
        res.message = "stalled: residual " + short_number(r.discrete_sup) + " after " +
                      std::to_string(res.iterations) + " iterations";
        return res;
      }
      const CROperatorMatrix a = linearize(res.map, target, steps);
      const VecX step = a.matrix.completeOrthogonalDecomposition().solve(-r.discrete);

      DiscretizedSphereMap dx;
      dx.grid = res.map.grid;
      dx.set_flat(step);
      const NodeValues nv = node_values(res.map), nx = node_values(dx);
      const SphereGrid& g = *res.map.grid;
      DiscretizedSphereMap next = res.map;
      for (int c = 0; c < 2; ++c) {
        MatX moved(g.node_count(), 6);
        for (int n = 0; n < g.node_count(); ++n) {
          moved.row(n) = target_exp(target, c, nv.u[c].row(n).transpose(),
                                    nx.u[c].row(n).transpose(), steps)
                             .transpose();
        }
        next.coeff[c] = g.val.transpose() * (g.weights.asDiagonal() * moved);
      }
      res.map = next;
      ++res.iterations;
      r = cr_residual(res.map, target);
      res.residual_trace.push_back(r.discrete_sup);
      if (!std::isfinite(r.discrete_sup) || r.discrete_sup > 1e3 * std::max(initial, tol)) {
        res.message = "diverged: residual " + short_number(r.discrete_sup) +
                      " at iteration " + std::to_string(res.iterations);
        return res;
      }
    }
  } catch (const std::exception& e) {
    res.converged = false;
    res.message = std::string("diverged: ") + e.what();
    return res;
  }
}

std::vector<Point> bolt_region() {
  GridSpec spec;
  spec.half_width = 0.7;
  spec.n = 5;
  return grid_points(spec);
}

MechanismReport mechanism_demo(const std::vector<double>& t_values, int N,
                               const MetricEvaluator& h, int max_iter, double tol) {
  MechanismReport rep;
  rep.N = N;
  const DiscretizedSphereMap u0 = bolt_lift(N);
  const std::vector<Point> region = bolt_region();
  for (double t : t_values) {
    MechanismRow row;
    row.t = t;
    const TargetModel target = perturbed_bolt_target(t, 1, h);
    const ContinuationResult c = newton_continue(u0, target, max_iter, tol);
    row.converged = c.converged;
    row.iterations = c.iterations;
    row.initial_residual = c.residual_trace.front();
    row.residual = c.residual_trace.back();
    row.message = c.message;
    row.integral = integrate_form(c.map, perturbed_reznikov_form(t, h));
    row.margin = region_scan(perturbed_bolt(t, h), region).min_margin;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace twistor
