#include <cmath>
#include <random>

#include "doctest.h"
#include "twistor/errors.hpp"
#include "twistor/jet.hpp"
#include "twistor/metric.hpp"

using namespace twistor;

namespace {

bool zero_derivs(const Jet2& j) {
  for (double g : j.grad)
    if (g != 0.0) return false;
  for (double h : j.hess)
    if (h != 0.0) return false;
  return true;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("coordinate jets") {
  const Jet2 a = jet_var(0, 2.5);
  CHECK(a.value == 2.5);
  CHECK(a.grad == std::array<double, 4>{1, 0, 0, 0});
  for (double h : a.hess) CHECK(h == 0.0);

  const Jet2 b = jet_var(3, -1.0);
  CHECK(b.value == -1.0);
  CHECK(b.grad == std::array<double, 4>{0, 0, 0, 1});

  CHECK_THROWS_AS(jet_var(5, 0.0), ArgumentError);
  CHECK_THROWS_AS(jet_var(-1, 0.0), ArgumentError);
  CHECK(zero_derivs(jet_const(7.0)));
}

TEST_CASE("Leibniz rule") {
  const Jet2 x = jet_var(0, 3.0);
  const Jet2 sq = x * x;
  CHECK(sq.value == 9.0);
  CHECK(sq.grad[0] == 6.0);
  CHECK(sq.h(0, 0) == 2.0);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j)
      if (i + j > 0) CHECK(sq.h(i, j) == 0.0);

  const auto p = jet_point({2.0, 5.0, 0.0, 0.0});
  const Jet2 xy = p[0] * p[1];
  CHECK(xy.value == 10.0);
  CHECK(xy.grad[0] == 5.0);
  CHECK(xy.grad[1] == 2.0);
  CHECK(xy.h(0, 1) == 1.0);
  CHECK(xy.h(1, 0) == 1.0);
  CHECK(xy.h(0, 0) == 0.0);

  const Jet2 j = sin(p[0]) * p[1] + exp(p[1] * 0.1);
  const Jet2 k = Jet2(4.0) * j;
  CHECK(k.value == doctest::Approx(4.0 * j.value));
  for (int i = 0; i < 4; ++i) CHECK(k.grad[i] == doctest::Approx(4.0 * j.grad[i]));
  for (int i = 0; i < 10; ++i) CHECK(k.hess[i] == doctest::Approx(4.0 * j.hess[i]));
}

TEST_CASE("elementary functions") {
  const Jet2 e = exp(jet_var(0, 0.0));
  CHECK(e.value == doctest::Approx(1.0));
  CHECK(e.grad[0] == doctest::Approx(1.0));
  CHECK(e.h(0, 0) == doctest::Approx(1.0));

  const Jet2 s = sqrt(jet_const(4.0));
  CHECK(s.value == doctest::Approx(2.0));
  CHECK(zero_derivs(s));

  CHECK_THROWS_AS(log(jet_const(-1.0)), EvaluationError);
  CHECK_THROWS_AS(sqrt(jet_var(0, -1.0)), EvaluationError);
  CHECK_THROWS_AS(reciprocal(jet_const(0.0)), EvaluationError);

  const Jet2 x = jet_var(1, 0.7);
  const Jet2 pw = jet_unary(Elementary::Pow, x, 1.5);
  CHECK(pw.value == doctest::Approx(std::pow(0.7, 1.5)));
  CHECK(pw.grad[1] == doctest::Approx(1.5 * std::pow(0.7, 0.5)));
  CHECK(pw.h(1, 1) == doctest::Approx(0.75 * std::pow(0.7, -0.5)));
  const Jet2 th = tanh(x);
  CHECK(th.grad[1] == doctest::Approx(1.0 - std::tanh(0.7) * std::tanh(0.7)));
}

TEST_CASE("finite-difference oracle") {
  const Jet2 q = fd_oracle([](const Point& x) { return x[0] * x[0]; }, {1, 0, 0, 0}, 1e-4);
  CHECK(std::abs(q.grad[0] - 2.0) < 1e-6);
  CHECK(std::abs(q.h(0, 0) - 2.0) < 1e-4);

  const Jet2 s = fd_oracle([](const Point& x) { return std::sin(x[1]); }, {0, 0, 0, 0}, 1e-4);
  CHECK(std::abs(s.grad[1] - 1.0) < 1e-8);

  CHECK_THROWS_AS(fd_oracle([](const Point&) { return 0.0; }, {0, 0, 0, 0}, 0.0),
                  ArgumentError);
  CHECK_THROWS_AS(fd_oracle([](const Point& x) { return std::log(x[0]); }, {0, 0, 0, 0}, 1e-4),
                  EvaluationError);
}

TEST_CASE("round sphere conformal factor agrees with its jet") {
  auto factor = [](const auto& x) {
    auto u = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    auto f = 2.0 / (1.0 + u);
    return f * f;
  };
  for (const Point p : {Point{0, 0, 0, 0}, Point{0.3, -0.2, 0.5, 0.1}}) {
    const Jet2 j = [&] {
      const auto x = jet_point(p);
      const Jet2 u = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
      const Jet2 f = 2.0 * reciprocal(1.0 + u);
      return f * f;
    }();
    const Jet2 fd = fd_oracle([&](const Point& x) { return factor(x); }, p, 1e-4);
    CHECK(rel(fd.value, j.value) < 1e-5);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(fd.grad[i] - j.grad[i]) < 1e-5 * std::max(1.0, std::abs(j.grad[i])));
    for (int k = 0; k < 10; ++k) CHECK(std::abs(fd.hess[k] - j.hess[k]) < 1e-5 * std::max(1.0, std::abs(j.hess[k])));
  }
}

TEST_CASE("catalog metric jets match the finite-difference oracle") {
  std::mt19937_64 rng(11);
  for (const auto& name : catalog_names()) {
    const MetricChart chart = catalog(name);
    for (int s = 0; s < 100; ++s) {
      const Point x = chart.domain.sample(rng);
      const MetricJet g = metric_jet(chart, x);
      double scale = 0.0;
      for (const auto& c : g) scale = std::max(scale, std::abs(c.value));
      for (int k = 0; k < kSymSize; ++k) {
        const Jet2 fd = fd_oracle(
            [&](const Point& y) { return chart.evaluator(y)[k].value; }, x, 1e-4);
        INFO(name << " component " << k);
        CHECK(std::abs(fd.value - g[k].value) <= 1e-5 * std::max(scale, 1e-3));
        for (int i = 0; i < 4; ++i)
          CHECK(std::abs(fd.grad[i] - g[k].grad[i]) <=
                1e-5 * std::max({std::abs(g[k].grad[i]), scale, 1e-3}));
        for (int i = 0; i < 10; ++i)
          CHECK(std::abs(fd.hess[i] - g[k].hess[i]) <=
                1e-3 * std::max({std::abs(g[k].hess[i]), scale, 1e-3}));
      }
    }
  }
}

TEST_CASE("jet arithmetic is associative and commutative") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto random_jet = [&] {
    Jet2 j;
    j.value = u(rng);
    for (auto& g : j.grad) g = u(rng);
    for (auto& h : j.hess) h = u(rng);
    return j;
  };
  auto close = [](const Jet2& a, const Jet2& b) {
    auto ok = [](double x, double y) { return std::abs(x - y) <= 1e-13 * std::max(1.0, std::abs(y)); };
    if (!ok(a.value, b.value)) return false;
    for (int i = 0; i < 4; ++i)
      if (!ok(a.grad[i], b.grad[i])) return false;
    for (int i = 0; i < 10; ++i)
      if (!ok(a.hess[i], b.hess[i])) return false;
    return true;
  };
  for (int t = 0; t < 200; ++t) {
    const Jet2 a = random_jet(), b = random_jet(), c = random_jet();
    CHECK(close(a + b, b + a));
    CHECK(close(a * b, b * a));
    CHECK(close((a + b) + c, a + (b + c)));
    CHECK(close((a * b) * c, a * (b * c)));
  }
}
