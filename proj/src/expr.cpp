#include "twistor/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "twistor/errors.hpp"

namespace twistor {

namespace {

struct FunctionName {
  const char* name;
  Elementary f;
};
constexpr FunctionName kFunctions[] = {
    {"sin", Elementary::Sin},   {"cos", Elementary::Cos},   {"exp", Elementary::Exp},
    {"log", Elementary::Log},   {"sqrt", Elementary::Sqrt}, {"tanh", Elementary::Tanh},
};

const char* function_name(Elementary f) {
  for (const auto& fn : kFunctions)
    if (fn.f == f) return fn.name;
  throw ArgumentError("expression: function has no name");
}

Expr constant(double v) {
  Expr e;
  e.kind = Expr::Kind::Constant;
  e.value = v;
  return e;
}

Expr node(Expr::Kind kind, std::vector<Expr> args) {
  Expr e;
  e.kind = kind;
  e.args = std::move(args);
  return e;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = sum();
    skip_space();
    if (pos_ < text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { fail_at(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const {
    throw ParseError("expression: " + what, at);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr sum() {
    Expr e = product();
    while (true) {
      if (accept('+')) {
        e = node(Expr::Kind::Add, {std::move(e), product()});
      } else if (accept('-')) {
        e = node(Expr::Kind::Subtract, {std::move(e), product()});
      } else {
        return e;
      }
    }
  }

  Expr product() {
    Expr e = unary();
    while (true) {
      if (accept('*')) {
        e = node(Expr::Kind::Multiply, {std::move(e), unary()});
      } else if (accept('/')) {
        e = node(Expr::Kind::Divide, {std::move(e), unary()});
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return node(Expr::Kind::Negate, {unary()});
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (accept('^')) return node(Expr::Kind::Power, {std::move(base), unary()});
    return base;
  }

  Expr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (accept('(')) {
      Expr e = sum();
      expect(')');
      return e;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    double v = 0.0;
    const auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec == std::errc::result_out_of_range) fail_at("number out of range", start);
    if (ec != std::errc()) fail_at("malformed number", start);
    pos_ = static_cast<std::size_t>(end - text_.data());
    return constant(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '4') {
      Expr e;
      e.kind = Expr::Kind::Variable;
      e.variable = name[1] - '1';
      return e;
    }
    if (name == "pi") return constant(std::numbers::pi);
    for (const auto& fn : kFunctions) {
      if (name == fn.name) {
        expect('(');
        Expr e = node(Expr::Kind::Call, {sum()});
        e.function = fn.f;
        expect(')');
        return e;
      }
    }
    fail_at("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Subtract: return 1;
    case Expr::Kind::Multiply:
    case Expr::Kind::Divide: return 2;
    case Expr::Kind::Negate: return 3;
    case Expr::Kind::Power: return 4;
    default: return 5;
  }
}

void print_into(const Expr& e, int min_prec, std::string& out) {
  const bool paren = precedence(e) < min_prec || (e.kind == Expr::Kind::Constant && e.value < 0);
  if (paren) out += '(';
  switch (e.kind) {
    case Expr::Kind::Constant: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", e.value);
      out += buf;
      break;
    }
    case Expr::Kind::Variable:
      out += 'x';
      out += static_cast<char>('1' + e.variable);
      break;
    case Expr::Kind::Negate:
      out += '-';
      print_into(e.args[0], 3, out);
      break;
    case Expr::Kind::Add:
    case Expr::Kind::Subtract:
      print_into(e.args[0], 1, out);
      out += e.kind == Expr::Kind::Add ? " + " : " - ";
      print_into(e.args[1], 2, out);
      break;
    case Expr::Kind::Multiply:
    case Expr::Kind::Divide:
      print_into(e.args[0], 2, out);
      out += e.kind == Expr::Kind::Multiply ? "*" : "/";
      print_into(e.args[1], 3, out);
      break;
    case Expr::Kind::Power:
      print_into(e.args[0], 5, out);
      out += '^';
      print_into(e.args[1], 3, out);
      break;
    case Expr::Kind::Call:
      out += function_name(e.function);
      out += '(';
      print_into(e.args[0], 0, out);
      out += ')';
      break;
  }
  if (paren) out += ')';
}

bool has_variable(const Expr& e) {
  if (e.kind == Expr::Kind::Variable) return true;
  for (const Expr& a : e.args)
    if (has_variable(a)) return true;
  return false;
}

// Real arithmetic with the operation sequence of the jet value slot.
struct RealOps {
  static double divide(double a, double b) {
    if (b == 0.0) throw EvaluationError("reciprocal of zero");
    return a * (1.0 / b);
  }
  static double power(double a, double p) {
    if (p == 0.0) return 1.0;
    if (p == 1.0) return a;
    if (p == 2.0) return a * a;
    if (a < 0.0 && std::floor(p) != p) throw EvaluationError("non-integral power of negative value");
    return std::pow(a, p);
  }
  static double call(Elementary f, double a) {
    switch (f) {
      case Elementary::Sin: return std::sin(a);
      case Elementary::Cos: return std::cos(a);
      case Elementary::Exp: return std::exp(a);
      case Elementary::Log:
        if (!(a > 0.0)) throw EvaluationError("log of non-positive value " + std::to_string(a));
        return std::log(a);
      case Elementary::Sqrt:
        if (a < 0.0) throw EvaluationError("sqrt of non-positive value " + std::to_string(a));
        return std::sqrt(a);
      case Elementary::Tanh: return std::tanh(a);
      default: throw ArgumentError("expression: unsupported function");
    }
  }
};

struct JetOps {
  static Jet2 divide(const Jet2& a, const Jet2& b) { return a / b; }
  static Jet2 power(const Jet2& a, double p) { return pow(a, p); }
  static Jet2 call(Elementary f, const Jet2& a) { return jet_unary(f, a); }
};

template <class T, class Ops>
T eval_impl(const Expr& e, const std::array<T, kDim>& x) {
  switch (e.kind) {
    case Expr::Kind::Constant: return T(e.value);
    case Expr::Kind::Variable: return x[e.variable];
    case Expr::Kind::Negate: return -eval_impl<T, Ops>(e.args[0], x);
    case Expr::Kind::Add: return eval_impl<T, Ops>(e.args[0], x) + eval_impl<T, Ops>(e.args[1], x);
    case Expr::Kind::Subtract:
      return eval_impl<T, Ops>(e.args[0], x) - eval_impl<T, Ops>(e.args[1], x);
    case Expr::Kind::Multiply:
      return eval_impl<T, Ops>(e.args[0], x) * eval_impl<T, Ops>(e.args[1], x);
    case Expr::Kind::Divide:
      return Ops::divide(eval_impl<T, Ops>(e.args[0], x), eval_impl<T, Ops>(e.args[1], x));
    case Expr::Kind::Power: {
      const T base = eval_impl<T, Ops>(e.args[0], x);
      if (!has_variable(e.args[1])) {
        return Ops::power(base, eval_impl<double, RealOps>(e.args[1], Point{}));
      }
      const T expo = eval_impl<T, Ops>(e.args[1], x);
      return Ops::call(Elementary::Exp, expo * Ops::call(Elementary::Log, base));
    }
    case Expr::Kind::Call: return Ops::call(e.function, eval_impl<T, Ops>(e.args[0], x));
  }
  throw ArgumentError("expression: bad node");
}

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

std::string print_expr(const Expr& e) {
  std::string out;
  print_into(e, 0, out);
  return out;
}

std::size_t count_kind(const Expr& e, Expr::Kind kind) {
  std::size_t n = e.kind == kind ? 1 : 0;
  for (const Expr& a : e.args) n += count_kind(a, kind);
  return n;
}

double evaluate(const Expr& e, const Point& x) { return eval_impl<double, RealOps>(e, x); }

Jet2 evaluate(const Expr& e, const std::array<Jet2, kDim>& x) {
  return eval_impl<Jet2, JetOps>(e, x);
}

TensorExpr conformal_tensor(const Expr& factor) {
  TensorExpr t;
  for (int i = 0; i < kDim; ++i)
    for (int j = i; j < kDim; ++j) t[sym_index(i, j)] = i == j ? factor : constant(0.0);
  return t;
}

MetricEvaluator expression_tensor(const TensorExpr& components) {
  return [components](const Point& x) {
    const auto xj = jet_point(x);
    MetricJet g;
    for (int k = 0; k < kSymSize; ++k) g[k] = evaluate(components[k], xj);
    return g;
  };
}

MetricChart expression_chart(const std::string& name, const TensorExpr& components,
                             const Domain& domain, int orientation) {
  if (orientation != 1 && orientation != -1)
    throw ArgumentError("expression_chart: orientation must be +1 or -1");
  MetricChart chart;
  chart.name = name;
  chart.domain = domain;
  chart.evaluator = expression_tensor(components);
  chart.orientation = orientation;
  return chart;
}

}  // namespace twistor
