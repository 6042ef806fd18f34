// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "brute_force_margin.hpp"
#include "twistor/continuation.hpp"
#include "twistor/curvature.hpp"
#include "twistor/hyperkahler.hpp"
#include "twistor/metric.hpp"
#include "twistor/sphere_map.hpp"
#include "twistor/taming.hpp"
#include "twistor/twistor_space.hpp"

using namespace twistor;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Vec3(n(rng), n(rng), n(rng)).normalized();
}

Vec6 random_vec6(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec6 v;
  for (int i = 0; i < 6; ++i) v(i) = n(rng);
  return v;
}

TwistorPoint random_twistor_point(const MetricChart& c, std::mt19937_64& rng) {
  return make_twistor_point(c.domain.sample(rng), random_unit(rng));
}

// Criterion 1: tr A = tr C = R/4.
Outcome traces() {
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (const auto& name : catalog_names()) {
    const MetricChart c = catalog(name);
    for (int i = 0; i < 50; ++i) {
      const CurvatureBlocks b = curvature_blocks(c, c.domain.sample(rng));
      worst = std::max({worst, std::abs(b.A.trace() - b.scalar / 4.0),
                        std::abs(b.C.trace() - b.scalar / 4.0)});
    }
  }
  return {worst < 1e-8, "max trace error " + fmt("%.3g", worst) + " over 400 points"};
}

// Criterion 2: constant curvature blocks.
Outcome space_forms() {
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (const auto& [name, sign] : {std::pair{"round-s4", 1.0}, std::pair{"hyperbolic-h4", -1.0}}) {
    const MetricChart c = catalog(name);
    for (int i = 0; i < 20; ++i) {
      const CurvatureBlocks b = curvature_blocks(c, c.domain.sample(rng));
      worst = std::max({worst, (b.A - sign * Mat3::Identity()).cwiseAbs().maxCoeff(),
                        b.B.cwiseAbs().maxCoeff(), std::abs(b.scalar - 12.0 * sign)});
    }
  }
  return {worst < 1e-8, "max block error " + fmt("%.3g", worst)};
}

// Criterion 3: taming verdicts on the catalog.
Outcome taming_verdicts() {
  std::mt19937_64 rng(3);
  bool ok = true;
  std::string detail;
  auto expect = [&](const std::string& name, int orientation, TamingClass cls,
                    std::function<bool(double)> margin_ok) {
    MetricChart c = catalog(name);
    if (orientation != 0) c.orientation = orientation;
    for (int i = 0; i < 10; ++i) {
      const TamingVerdict v = classify(curvature_blocks(c, c.domain.sample(rng)));
      if (v.cls != cls || !margin_ok(v.margin)) {
        ok = false;
        detail += name + " gave " + to_string(v.cls) + " margin " + fmt("%.6g", v.margin) + "; ";
        return;
      }
    }
  };
  auto one = [](double m) { return std::abs(m - 1.0) < 1e-6; };
  auto zero = [](double m) { return std::abs(m) < 1e-6; };
  auto positive = [](double m) { return m > 0.0; };
  expect("round-s4", 0, TamingClass::TamedJPlus, one);
  expect("hyperbolic-h4", 0, TamingClass::TamedJMinus, one);
  expect("complex-hyperbolic-ch2", -1, TamingClass::TamedJMinus, positive);
  for (const char* name : {"eguchi-hanson", "eguchi-hanson-bolt", "flat"}) {
    MetricChart c = catalog(name);
    for (int i = 0; i < 10; ++i) {
      const TamingVerdict v = classify(curvature_blocks(c, c.domain.sample(rng)));
      if (!zero(v.margin)) {
        ok = false;
        detail += std::string(name) + " margin " + fmt("%.3g", v.margin) + "; ";
        break;
      }
    }
  }
  return {ok, ok ? "s4 J+, h4 J-, ch2 J-, zero margin on flat and hyperkaehler charts" : detail};
}

// Criterion 4: lattice with polish against a dense scan.
Outcome margin_oracle() {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  double worst = 0.0, worst_raw = 0.0;
  bool below = true;
  for (int k = 0; k < 100; ++k) {
    Mat3 A, B;
    for (int i = 0; i < 9; ++i) A(i) = n(rng);
    A = (0.5 * (A + A.transpose())).eval();
    for (int i = 0; i < 9; ++i) B(i) = 0.7 * n(rng);
    const MarginResult m = taming_margin(A, B);
    const MarginResult dense = taming_margin_dense(A, B, 200000);
    below = below && m.margin <= dense.margin + 1e-12;
    worst_raw = std::max(worst_raw, std::abs(m.margin - dense.margin));
    worst = std::max(worst, std::abs(m.margin - testing::brute_force_margin(A, B)));
  }
  return {worst < 1e-4 && below, "max deviation " + fmt("%.3g", worst) +
                                     " from refined dense scan (raw 200k scan " +
                                     fmt("%.3g", worst_raw) + ")"};
}

// Criterion 5: Reznikov form.
Outcome reznikov() {
  std::mt19937_64 rng(5);
  double fibre = 0.0, d_omega = 0.0, horizontal = 0.0, taming = INFINITY;
  for (const auto& name : catalog_names()) {
    const MetricChart c = catalog(name);
    for (int i = 0; i < 3; ++i) {
      const TwistorPoint p = random_twistor_point(c, rng);
      fibre = std::max(fibre, std::abs(fibre_integral(c, p.x) - 4.0 * std::numbers::pi));
      d_omega = std::max(d_omega, d_omega_check(c, p));
    }
  }
  const MetricChart s4 = catalog("round-s4");
  for (int i = 0; i < 50; ++i) {
    const TwistorPoint p = random_twistor_point(s4, rng);
    const Vec6 u = random_vec6(rng);
    taming = std::min(taming, reznikov_form(s4, p, u, twistor_acs(s4, p, 1) * u) / u.squaredNorm());
  }
  const MetricChart eh = catalog("eguchi-hanson");
  for (int i = 0; i < 20; ++i) {
    const TwistorPoint p = random_twistor_point(eh, rng);
    const TwistorTangentFrame f = twistor_frame(eh, p);
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        horizontal = std::max(horizontal, std::abs(reznikov_form(eh, p, f.horizontal[a], f.horizontal[b])));
  }
  const bool ok = fibre < 1e-6 && d_omega < 1e-5 && taming > 0.0 && horizontal < 1e-6;
  return {ok, "fibre error " + fmt("%.3g", fibre) + ", d omega " + fmt("%.3g", d_omega) +
                  ", min omega(u, J+u) " + fmt("%.3g", taming) + ", horizontal " +
                  fmt("%.3g", horizontal)};
}

// Criterion 6: integrability.
Outcome integrability() {
  std::mt19937_64 rng(6);
  double plus_good = 0.0, plus_s2 = INFINITY, minus = INFINITY;
  for (const char* name : {"round-s4", "hyperbolic-h4"}) {
    const MetricChart c = catalog(name);
    for (int i = 0; i < 5; ++i) plus_good = std::max(plus_good, nijenhuis(c, random_twistor_point(c, rng), 1));
  }
  const MetricChart s2 = catalog("s2xs2");
  for (int i = 0; i < 5; ++i) plus_s2 = std::min(plus_s2, nijenhuis(s2, random_twistor_point(s2, rng), 1));
  for (const auto& name : catalog_names()) {
    const MetricChart c = catalog(name);
    for (int i = 0; i < 3; ++i) minus = std::min(minus, nijenhuis(c, random_twistor_point(c, rng), -1));
  }
  const bool ok = plus_good < 1e-4 && plus_s2 > 1e-2 && minus > 1e-2;
  return {ok, "max N(J+) on s4/h4 " + fmt("%.3g", plus_good) + ", min N(J+) on s2xs2 " +
                  fmt("%.3g", plus_s2) + ", min N(J-) " + fmt("%.3g", minus)};
}

// Criterion 7: hyperkaehler triple and self-check.
Outcome hyperkaehler() {
  std::mt19937_64 rng(7);
  double quat = 0.0, parallel = 0.0, self = 0.0;
  for (const char* name : {"eguchi-hanson", "eguchi-hanson-bolt"}) {
    const MetricChart c = catalog(name);
    std::vector<Point> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(c.domain.sample(rng));
    const TripleCheck t = check_triple(HyperkaehlerTriple(c), pts);
    quat = std::max({quat, t.quaternion, t.orthogonality});
    parallel = std::max({parallel, t.parallel, t.closedness});
  }
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> radius(1.2, 4.0);
  std::vector<Point> shell;
  while (shell.size() < 32) {
    Point d{n(rng), n(rng), n(rng), n(rng)};
    const double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3]);
    const double rr = radius(rng);
    for (auto& x : d) x *= rr / r;
    shell.push_back(d);
  }
  const SelfCheckReport rep = eh_selfcheck(catalog("eguchi-hanson"), shell);
  self = std::max({rep.max_ricci, rep.max_a, rep.max_b});
  const bool ok = quat < 1e-5 && parallel < 1e-5 && self < 1e-6;
  return {ok, "quaternion " + fmt("%.3g", quat) + ", nabla I " + fmt("%.3g", parallel) +
                  ", self-check " + fmt("%.3g", self)};
}

// Criterion 8: regularity of the bolt sphere.
Outcome bolt_regularity() {
  bool ok = true;
  std::string detail;
  for (int N : {16, 24, 32}) {
    const DiscretizedSphereMap u = bolt_lift(N);
    const KernelReport k = kernel_cokernel(linearize(u, bolt_product_target(1)), 1e-5);
    const double angle = principal_angles(k.kernel_basis, mobius_fields(*u.grid)).maxCoeff();
    ok = ok && k.kernel == 6 && k.cokernel == 0 && k.gap_ratio > 100.0 && angle < 0.15;
    detail += "N=" + std::to_string(N) + " (" + std::to_string(k.kernel) + "," +
              std::to_string(k.cokernel) + ") gap " + fmt("%.3g", k.gap_ratio) + " angle " +
              fmt("%.2g", angle) + "; ";
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

// Criterion 9: continuation under the perturbation.
Outcome mechanism() {
  const MechanismReport rep = mechanism_demo({0.0, 1e-3, 1e-2}, 24);
  bool ok = true;
  std::string detail;
  for (const MechanismRow& r : rep.rows) {
    ok = ok && r.converged && r.residual < 1e-8 && std::abs(r.integral) < 5e-3 && r.margin <= 1e-9;
    detail += "t=" + fmt("%g", r.t) + " residual " + fmt("%.2g", r.residual) + " integral " +
              fmt("%.2g", r.integral) + " margin " + fmt("%.3g", r.margin) + "; ";
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Criterion 10: repeated CLI runs give identical bytes.
Outcome determinism() {
  const std::filesystem::path dir = TWISTOR_ACCEPTANCE_DIR;
  std::filesystem::create_directories(dir);
  const std::vector<std::string> runs = {
      "analyze --metric round-s4 --grid 3",
      "taming-scan --metric fubini-study-cp2 --grid 2",
      "nijenhuis --metric s2xs2 --samples 6 --seed 3",
      "reznikov-check --metric eguchi-hanson --samples 4",
      "sphere-regularity --N 16",
      "mechanism-demo --N 16 --t 0 0.001",
  };
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      const auto out = dir / ("run" + std::to_string(i) + "_" + std::to_string(rep) + ".json");
      std::filesystem::remove(out);
      const std::string cmd = std::string("\"") + TWISTOR_CLI_PATH + "\" " + runs[i] + " --output \"" +
                              out.string() + "\"";
      const int rc = std::system(cmd.c_str());
      const std::string text = slurp(out);
      if (rc == -1 || text.empty()) {
        ok = false;
        detail += "no report for '" + runs[i] + "'; ";
      }
      if (rep == 0) {
        first = text;
      } else if (text != first) {
        ok = false;
        detail += "reports differ for '" + runs[i] + "'; ";
      }
    }
  }
  return {ok, ok ? std::to_string(runs.size()) + " commands, byte-identical reports" : detail};
}

struct Criterion {
  int id;
  std::string name;
  double seconds_limit;
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "curvature block traces", 5.0, traces},
      {2, "space form blocks", INFINITY, space_forms},
      {3, "catalog taming verdicts", 10.0, taming_verdicts},
      {4, "taming margin oracle", INFINITY, margin_oracle},
      {5, "Reznikov form", 60.0, reznikov},
      {6, "Nijenhuis tensors", INFINITY, integrability},
      {7, "hyperkaehler triple", INFINITY, hyperkaehler},
      {8, "bolt sphere regularity", 600.0, bolt_regularity},
      {9, "continuation mechanism", 900.0, mechanism},
      {10, "report determinism", INFINITY, determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.seconds_limit;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("criterion %2d %s: %s (%.1f s%s) %s\n", c.id, c.name.c_str(), pass ? "PASS" : "FAIL",
                secs, in_time ? "" : ", over time limit", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
