#pragma once

// Second-order forward-mode differentiation in four chart variables.
//
// A Jet2 carries a value together with its gradient and Hessian with respect
// to the chart coordinates (x0, x1, x2, x3). The Hessian is stored as the ten
// independent entries of a symmetric 4x4 matrix, so symmetry holds by
// construction.

#include <array>
#include <cstddef>
#include <functional>

namespace twistor {

inline constexpr int kDim = 4;
inline constexpr int kSymSize = 10;

using Point = std::array<double, kDim>;

// Packed index of the (i, j) entry of a symmetric 4x4 matrix.
constexpr int sym_index(int i, int j) {
  if (i > j) {
    const int t = i;
    i = j;
    j = t;
  }
  return i * kDim - i * (i - 1) / 2 + (j - i);
}

struct Jet2 {
  double value = 0.0;
  std::array<double, kDim> grad{};
  std::array<double, kSymSize> hess{};

  Jet2() = default;
  Jet2(double c) : value(c) {}  // NOLINT: constants lift implicitly

  double h(int i, int j) const { return hess[sym_index(i, j)]; }
  double& h(int i, int j) { return hess[sym_index(i, j)]; }

  Jet2& operator+=(const Jet2& o);
  Jet2& operator-=(const Jet2& o);
  Jet2& operator*=(const Jet2& o);
  Jet2& operator/=(const Jet2& o);
  Jet2& operator*=(double s);
};

// Coordinate function x_index lifted at x. Throws ArgumentError if the
// index is not in 0..3.
Jet2 jet_var(int index, double x);
inline Jet2 jet_const(double c) { return Jet2(c); }

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);
Jet2 operator*(double s, const Jet2& a);
Jet2 operator*(const Jet2& a, double s);

// Elementary functions. Domain violations throw EvaluationError.
enum class Elementary { Sin, Cos, Exp, Log, Sqrt, Tanh, Pow, Reciprocal };

// Generic chain rule: f(a) given f, f', f'' evaluated at a.value.
Jet2 chain(const Jet2& a, double f, double df, double d2f);

Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sqrt(const Jet2& a);
Jet2 tanh(const Jet2& a);
Jet2 pow(const Jet2& a, double p);
Jet2 reciprocal(const Jet2& a);
Jet2 jet_unary(Elementary f, const Jet2& a, double exponent = 1.0);

// The four coordinate jets at x.
std::array<Jet2, kDim> jet_point(const Point& x);

// Central-difference estimate of value, gradient and Hessian of f at x.
// The gradient uses step h with one Richardson level (h, h/2); the
// Hessian uses step 10*h with one Richardson level.
using ScalarField = std::function<double(const Point&)>;
Jet2 fd_oracle(const ScalarField& f, const Point& x, double h);

}  // namespace twistor
