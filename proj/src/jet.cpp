#include "twistor/jet.hpp"

#include <cmath>
#include <string>

#include "twistor/errors.hpp"

namespace twistor {

Jet2 jet_var(int index, double x) {
  if (index < 0 || index >= kDim) {
    throw ArgumentError("jet_var: index " + std::to_string(index) +
                        " outside 0..3");
  }
  Jet2 j(x);
  j.grad[index] = 1.0;
  return j;
}

std::array<Jet2, kDim> jet_point(const Point& x) {
  return {jet_var(0, x[0]), jet_var(1, x[1]), jet_var(2, x[2]),
          jet_var(3, x[3])};
}

Jet2& Jet2::operator+=(const Jet2& o) {
  value += o.value;
  for (int i = 0; i < kDim; ++i) grad[i] += o.grad[i];
  for (int k = 0; k < kSymSize; ++k) hess[k] += o.hess[k];
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
  value -= o.value;
  for (int i = 0; i < kDim; ++i) grad[i] -= o.grad[i];
  for (int k = 0; k < kSymSize; ++k) hess[k] -= o.hess[k];
  return *this;
}

Jet2& Jet2::operator*=(double s) {
  value *= s;
  for (auto& g : grad) g *= s;
  for (auto& h : hess) h *= s;
  return *this;
}

Jet2& Jet2::operator*=(const Jet2& o) {
  *this = *this * o;
  return *this;
}

Jet2& Jet2::operator/=(const Jet2& o) {
  *this = *this / o;
  return *this;
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r = a;
  r += b;
  return r;
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r = a;
  r -= b;
  return r;
}

Jet2 operator-(const Jet2& a) {
  Jet2 r = a;
  r *= -1.0;
  return r;
}

Jet2 operator*(double s, const Jet2& a) {
  Jet2 r = a;
  r *= s;
  return r;
}

Jet2 operator*(const Jet2& a, double s) { return s * a; }

Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value = a.value * b.value;
  for (int i = 0; i < kDim; ++i) {
    r.grad[i] = a.value * b.grad[i] + b.value * a.grad[i];
  }
  for (int i = 0; i < kDim; ++i) {
    for (int j = i; j < kDim; ++j) {
      const int k = sym_index(i, j);
      r.hess[k] = a.value * b.hess[k] + b.value * a.hess[k] +
                  a.grad[i] * b.grad[j] + a.grad[j] * b.grad[i];
    }
  }
  return r;
}

Jet2 chain(const Jet2& a, double f, double df, double d2f) {
  Jet2 r;
  r.value = f;
  for (int i = 0; i < kDim; ++i) r.grad[i] = df * a.grad[i];
  for (int i = 0; i < kDim; ++i) {
    for (int j = i; j < kDim; ++j) {
      const int k = sym_index(i, j);
      r.hess[k] = df * a.hess[k] + d2f * a.grad[i] * a.grad[j];
    }
  }
  return r;
}

Jet2 reciprocal(const Jet2& a) {
  if (a.value == 0.0) throw EvaluationError("reciprocal of zero");
  const double inv = 1.0 / a.value;
  return chain(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}

Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value);
  return chain(a, s, std::cos(a.value), -s);
}

Jet2 cos(const Jet2& a) {
  const double c = std::cos(a.value);
  return chain(a, c, -std::sin(a.value), -c);
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value);
  return chain(a, e, e, e);
}

Jet2 log(const Jet2& a) {
  if (!(a.value > 0.0)) {
    throw EvaluationError("log of non-positive value " +
                          std::to_string(a.value));
  }
  const double inv = 1.0 / a.value;
  return chain(a, std::log(a.value), inv, -inv * inv);
}

Jet2 sqrt(const Jet2& a) {
  if (!(a.value > 0.0)) {
    // sqrt is not differentiable at 0; constants at 0 are still fine.
    bool constant = a.value == 0.0;
    for (double g : a.grad) constant = constant && g == 0.0;
    for (double h : a.hess) constant = constant && h == 0.0;
    if (constant) return Jet2(0.0);
    throw EvaluationError("sqrt of non-positive value " +
                          std::to_string(a.value));
  }
  const double s = std::sqrt(a.value);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.value));
}

Jet2 tanh(const Jet2& a) {
  const double t = std::tanh(a.value);
  const double d = 1.0 - t * t;
  return chain(a, t, d, -2.0 * t * d);
}

Jet2 pow(const Jet2& a, double p) {
  if (p == 0.0) return Jet2(1.0);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  const bool integral = std::floor(p) == p;
  if (a.value < 0.0 && !integral) {
    throw EvaluationError("non-integral power of negative value");
  }
  if (a.value == 0.0 && p < 2.0) {
    throw EvaluationError("power not twice differentiable at zero");
  }
  const double f = std::pow(a.value, p);
  const double df = p * std::pow(a.value, p - 1.0);
  const double d2f = p * (p - 1.0) * std::pow(a.value, p - 2.0);
  return chain(a, f, df, d2f);
}

Jet2 jet_unary(Elementary f, const Jet2& a, double exponent) {
  switch (f) {
    case Elementary::Sin: return sin(a);
    case Elementary::Cos: return cos(a);
    case Elementary::Exp: return exp(a);
    case Elementary::Log: return log(a);
    case Elementary::Sqrt: return sqrt(a);
    case Elementary::Tanh: return tanh(a);
    case Elementary::Pow: return pow(a, exponent);
    case Elementary::Reciprocal: return reciprocal(a);
  }
  throw ArgumentError("unknown elementary function");
}

namespace {

Point shifted(Point x, int i, double di, int j = -1, double dj = 0.0) {
  x[i] += di;
  if (j >= 0) x[j] += dj;
  return x;
}

double eval_checked(const ScalarField& f, const Point& x) {
  const double v = f(x);
  if (!std::isfinite(v)) throw EvaluationError("fd_oracle: non-finite stencil value");
  return v;
}

double grad_fd(const ScalarField& f, const Point& x, int i, double h) {
  return (eval_checked(f, shifted(x, i, h)) - eval_checked(f, shifted(x, i, -h))) /
         (2.0 * h);
}

double hess_fd(const ScalarField& f, const Point& x, double f0, int i, int j,
               double h) {
  if (i == j) {
    return (eval_checked(f, shifted(x, i, h)) - 2.0 * f0 +
            eval_checked(f, shifted(x, i, -h))) /
           (h * h);
  }
  return (eval_checked(f, shifted(x, i, h, j, h)) -
          eval_checked(f, shifted(x, i, h, j, -h)) -
          eval_checked(f, shifted(x, i, -h, j, h)) +
          eval_checked(f, shifted(x, i, -h, j, -h))) /
         (4.0 * h * h);
}

}  // namespace

Jet2 fd_oracle(const ScalarField& f, const Point& x, double h) {
  if (!(h > 0.0)) throw ArgumentError("fd_oracle: step must be positive");
  Jet2 r;
  r.value = eval_checked(f, x);
  for (int i = 0; i < kDim; ++i) {
    const double coarse = grad_fd(f, x, i, h);
    const double fine = grad_fd(f, x, i, 0.5 * h);
    r.grad[i] = (4.0 * fine - coarse) / 3.0;
  }
  const double hh = 10.0 * h;
  for (int i = 0; i < kDim; ++i) {
    for (int j = i; j < kDim; ++j) {
      const double coarse = hess_fd(f, x, r.value, i, j, hh);
      const double fine = hess_fd(f, x, r.value, i, j, 0.5 * hh);
      r.h(i, j) = (4.0 * fine - coarse) / 3.0;
    }
  }
  return r;
}

}  // namespace twistor
