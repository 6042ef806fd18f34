#include "twistor/commands.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>

#include "twistor/continuation.hpp"
#include "twistor/errors.hpp"
#include "twistor/twistor_space.hpp"

namespace twistor {

namespace {

struct Failure {
  int exit_code;
  std::string kind;
  std::string message;
};

Json conventions() {
  return Json{
      {"blocks",
       "curvature operator on 2-forms in an oriented orthonormal frame, basis "
       "(s1+, s2+, s3+, s1-, s2-, s3-) with <F, G> = 1/2 sum F_ab G_ab; A: L+ -> L+, "
       "B: L+ -> L-, C: L- -> L-; matrices are listed by rows"},
      {"scalar", "R = 4 tr A = 4 tr C; the unit round 4-sphere has R = 12 and A = Id"},
      {"margin", "min over unit theta in L+ of |<A theta, theta>| - |B theta|"},
      {"dead_zone", json_number(kTamingDeadZone)},
      {"fibre", "unit self-dual forms theta; J_theta = sqrt(2) theta raised by the metric"},
      {"reznikov", "fibre area of the Reznikov form is 4 pi"},
      {"orientation", "+1 is the coordinate orientation dx1 dx2 dx3 dx4"},
      {"note", "toolkit convention: B scale and fibre radius are fixed as above"},
  };
}

MetricChart working_chart(const RunConfig& c) {
  MetricChart chart = resolve_metric(c);
  const MetricEvaluator h = resolve_perturbation(c);
  if (!h) return chart;
  PerturbationSpec spec;
  spec.base = chart;
  spec.direction = h;
  spec.t = c.perturbation.t.front();
  return perturb(spec);
}

Json region_summary(const RegionReport& r) {
  return Json{{"points", r.points.size()},
              {"errors", r.n_errors},
              {"tamed_j_plus", r.n_plus},
              {"tamed_j_minus", r.n_minus},
              {"not_tamed", r.n_not},
              {"region", to_string(r.region)},
              {"min_margin", json_number(r.min_margin)},
              {"min_point", json_point(r.min_point)}};
}

std::optional<Failure> analyze(const RunConfig& c, Json& doc) {
  const MetricChart chart = working_chart(c);
  const std::vector<Point> pts = grid_points(resolve_region(c));
  const RegionReport rr = region_scan(chart, pts);
  const int n = static_cast<int>(pts.size());
  std::vector<std::optional<CurvatureBlocks>> blocks(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    if (rr.points[i].verdict) blocks[i] = curvature_blocks(chart, pts[i]);
  }
  for (int i = 0; i < n; ++i) {
    Json p{{"x", json_point(pts[i])}};
    if (blocks[i]) {
      p["blocks"] = json_blocks(*blocks[i]);
      p["scalar"] = json_number(blocks[i]->scalar);
      p["verdict"] = json_verdict(*rr.points[i].verdict);
    } else {
      p["error"] = rr.points[i].error;
    }
    doc["per_point"].push_back(p);
  }
  doc["summaries"] = region_summary(rr);
  return std::nullopt;
}

std::optional<Failure> taming_scan(const RunConfig& c, Json& doc) {
  const MetricChart chart = working_chart(c);
  const RegionReport rr = region_scan(chart, grid_points(resolve_region(c)));
  std::size_t degenerate = 0;
  for (const PointVerdict& pv : rr.points) {
    Json p{{"x", json_point(pv.x)}};
    if (pv.verdict) {
      p["margin"] = json_number(pv.verdict->margin);
      p["class"] = to_string(pv.verdict->cls);
      p["degenerate"] = pv.verdict->degenerate;
      if (pv.verdict->degenerate) ++degenerate;
    } else {
      p["error"] = pv.error;
    }
    doc["per_point"].push_back(p);
  }
  doc["summaries"] = region_summary(rr);
  doc["summaries"]["degenerate"] = degenerate;
  if (degenerate > 0) {
    return Failure{kExitInconclusive, "inconclusive",
                   std::to_string(degenerate) + " points have a taming margin inside the dead zone"};
  }
  return std::nullopt;
}

struct Sample {
  Point x;
  Vec3 theta;
  Vec6 u;
};

std::vector<Sample> twistor_samples(const MetricChart& chart, int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Sample> out(n);
  for (Sample& s : out) {
    s.x = chart.domain.sample(rng);
    do {
      s.theta = Vec3(normal(rng), normal(rng), normal(rng));
    } while (s.theta.norm() < 1e-3);
    s.theta.normalize();
    for (int k = 0; k < 6; ++k) s.u(k) = normal(rng);
  }
  return out;
}

template <class F>
void parallel_samples(int n, F&& f) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      f(i);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

std::optional<Failure> nijenhuis_command(const RunConfig& c, Json& doc) {
  const MetricChart chart = working_chart(c);
  const std::vector<Sample> samples = twistor_samples(chart, c.numerics.samples, c.numerics.seed);
  const int n = static_cast<int>(samples.size());
  std::vector<double> plus(n), minus(n);
  parallel_samples(n, [&](int i) {
    const TwistorPoint p = make_twistor_point(samples[i].x, samples[i].theta);
    plus[i] = nijenhuis(chart, p, 1, c.numerics.fd_step);
    minus[i] = nijenhuis(chart, p, -1, c.numerics.fd_step);
  });
  double max_plus = 0.0, max_minus = 0.0, min_minus = INFINITY;
  for (int i = 0; i < n; ++i) {
    doc["per_point"].push_back(Json{{"x", json_point(samples[i].x)},
                                    {"theta", json_vector(samples[i].theta)},
                                    {"j_plus", json_number(plus[i])},
                                    {"j_minus", json_number(minus[i])}});
    max_plus = std::max(max_plus, plus[i]);
    max_minus = std::max(max_minus, minus[i]);
    min_minus = std::min(min_minus, minus[i]);
  }
  doc["summaries"] = Json{{"samples", n},
                          {"max_j_plus", json_number(max_plus)},
                          {"max_j_minus", json_number(max_minus)},
                          {"min_j_minus", json_number(min_minus)}};
  return std::nullopt;
}

std::optional<Failure> reznikov_check(const RunConfig& c, Json& doc) {
  const MetricChart chart = working_chart(c);
  const std::vector<Sample> samples = twistor_samples(chart, c.numerics.samples, c.numerics.seed);
  const int n = static_cast<int>(samples.size());
  struct Row {
    double fibre = 0, d_omega = 0, taming = 0, horizontal = 0;
  };
  std::vector<Row> rows(n);
  parallel_samples(n, [&](int i) {
    const TwistorPoint p = make_twistor_point(samples[i].x, samples[i].theta);
    Row& r = rows[i];
    r.fibre = fibre_integral(chart, p.x);
    r.d_omega = d_omega_check(chart, p, c.numerics.fd_step);
    const Vec6& u = samples[i].u;
    r.taming = reznikov_form(chart, p, u, twistor_acs(chart, p, 1) * u) / u.squaredNorm();
    const TwistorTangentFrame f = twistor_frame(chart, p);
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        r.horizontal =
            std::max(r.horizontal, std::abs(reznikov_form(chart, p, f.horizontal[a], f.horizontal[b])));
  });
  double fibre_err = 0, d_omega = 0, taming = INFINITY, horizontal = 0;
  for (int i = 0; i < n; ++i) {
    const Row& r = rows[i];
    doc["per_point"].push_back(Json{{"x", json_point(samples[i].x)},
                                    {"theta", json_vector(samples[i].theta)},
                                    {"fibre_integral", json_number(r.fibre)},
                                    {"d_omega", json_number(r.d_omega)},
                                    {"omega_u_jplus_u", json_number(r.taming)},
                                    {"horizontal", json_number(r.horizontal)}});
    fibre_err = std::max(fibre_err, std::abs(r.fibre - 4.0 * std::numbers::pi));
    d_omega = std::max(d_omega, r.d_omega);
    taming = std::min(taming, r.taming);
    horizontal = std::max(horizontal, r.horizontal);
  }
  doc["summaries"] = Json{{"samples", n},
                          {"max_fibre_error", json_number(fibre_err)},
                          {"max_d_omega", json_number(d_omega)},
                          {"min_omega_u_jplus_u", json_number(taming)},
                          {"max_horizontal", json_number(horizontal)}};
  return std::nullopt;
}

std::optional<Failure> sphere_regularity(const RunConfig& c, Json& doc) {
  const DiscretizedSphereMap u = bolt_lift(c.numerics.N);
  const TargetModel target = bolt_product_target(1);
  const SphereGrid& g = *u.grid;
  const CROperatorMatrix a = linearize(u, target);
  Json s{{"N", g.N},
         {"L", g.L},
         {"rows", a.matrix.rows()},
         {"cols", a.matrix.cols()},
         {"index", a.matrix.cols() - a.matrix.rows()},
         {"twist", g.twist},
         {"homotopy_class_tag", u.homotopy_class_tag},
         {"residual_sup", json_number(cr_residual(u, target).sup)},
         {"gap_factor", json_number(c.numerics.gap_factor)}};
  try {
    const KernelReport k = kernel_cokernel(a, c.numerics.gap_factor);
    s["kernel"] = k.kernel;
    s["cokernel"] = k.cokernel;
    s["gap_ratio"] = json_number(k.gap_ratio);
    s["sigma_max"] = json_number(k.sigma_max);
    s["threshold"] = json_number(k.threshold);
    const int r = static_cast<int>(k.spectrum.size()) - k.kernel;
    if (r > 0) s["smallest_retained"] = json_number(k.spectrum(r - 1));
    if (k.kernel > 0) {
      s["largest_dropped"] = json_number(k.spectrum(r));
      const VecX angles = principal_angles(k.kernel_basis, mobius_fields(g));
      s["moebius_max_angle"] = json_number(angles.maxCoeff());
      s["fibre_fraction"] = json_number(fibre_fraction(g, k.kernel_basis));
    }
    doc["summaries"] = s;
  } catch (const InconclusiveError& e) {
    doc["summaries"] = s;
    return Failure{kExitInconclusive, "inconclusive", e.what()};
  }
  return std::nullopt;
}

std::optional<Failure> mechanism(const RunConfig& c, Json& doc) {
  const MechanismReport rep = mechanism_demo(c.perturbation.t, c.numerics.N,
                                             resolve_perturbation(c), c.numerics.max_iter,
                                             c.numerics.tol);
  Json rows = Json::array();
  bool all = true;
  double max_integral = 0.0, max_margin = -INFINITY;
  for (const MechanismRow& r : rep.rows) {
    rows.push_back(Json{{"t", json_number(r.t)},
                        {"converged", r.converged},
                        {"iterations", r.iterations},
                        {"initial_residual", json_number(r.initial_residual)},
                        {"residual", json_number(r.residual)},
                        {"integral", json_number(r.integral)},
                        {"margin", json_number(r.margin)},
                        {"message", r.message}});
    all = all && r.converged;
    max_integral = std::max(max_integral, std::abs(r.integral));
    max_margin = std::max(max_margin, r.margin);
  }
  doc["summaries"] = Json{{"N", rep.N},
                          {"rows", rows},
                          {"all_converged", all},
                          {"max_abs_integral", json_number(max_integral)},
                          {"max_margin", json_number(max_margin)},
                          {"region_points", bolt_region().size()}};
  return std::nullopt;
}

Json base_report(const std::string& command) {
  return Json{{"tool_version", kToolVersion},
              {"command", command},
              {"config_echo", Json::object()},
              {"conventions", conventions()},
              {"per_point", Json::array()},
              {"summaries", Json::object()},
              {"status", Json{{"exit_code", kExitOk}, {"error", nullptr}}}};
}

void set_status(Json& doc, const Failure& f) {
  doc["status"] = Json{{"exit_code", f.exit_code},
                       {"error", Json{{"kind", f.kind}, {"message", f.message}}}};
}

}  // namespace

Json error_report(const std::string& command, const std::string& kind,
                  const std::string& message, int exit_code) {
  Json doc = base_report(command);
  set_status(doc, Failure{exit_code, kind, message});
  return doc;
}

RunOutcome run(const RunConfig& config) {
  RunOutcome out;
  out.report = base_report(to_string(config.command));
  out.report["config_echo"] = config_echo(config);
  std::optional<Failure> failure;
  try {
    validate(config);
    switch (config.command) {
      case Command::Analyze: failure = analyze(config, out.report); break;
      case Command::TamingScan: failure = taming_scan(config, out.report); break;
      case Command::Nijenhuis: failure = nijenhuis_command(config, out.report); break;
      case Command::ReznikovCheck: failure = reznikov_check(config, out.report); break;
      case Command::SphereRegularity: failure = sphere_regularity(config, out.report); break;
      case Command::MechanismDemo: failure = mechanism(config, out.report); break;
    }
  } catch (const InconclusiveError& e) {
    failure = Failure{kExitInconclusive, "inconclusive", e.what()};
  } catch (const std::invalid_argument& e) {  // ConfigError, ArgumentError
    failure = Failure{kExitValidation, "validation", e.what()};
  } catch (const ParseError& e) {
    failure = Failure{kExitValidation, "validation", e.what()};
  } catch (const LookupError& e) {
    failure = Failure{kExitValidation, "validation", e.what()};
  } catch (const DomainError& e) {
    failure = Failure{kExitValidation, "validation", e.what()};
  } catch (const ValidityError& e) {
    failure = Failure{kExitValidation, "validation", e.what()};
  } catch (const EvaluationError& e) {
    failure = Failure{kExitValidation, "validation", e.what()};
  } catch (const std::exception& e) {
    failure = Failure{kExitFailure, "failure", e.what()};
  }
  if (failure) {
    set_status(out.report, *failure);
    out.exit_code = failure->exit_code;
  }
  return out;
}

int write_report(const Json& report, const OutputConfig& output, int exit_code,
                 std::ostream& out) {
  const std::string text = emit_report(report, output.format);
  if (output.path.empty()) {
    out << text;
    out.flush();
    return exit_code;
  }
  std::ofstream f(output.path, std::ios::binary);
  f << text;
  f.close();
  if (!f) return kExitFailure;
  return exit_code;
}

}  // namespace twistor
