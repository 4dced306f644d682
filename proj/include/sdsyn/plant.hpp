// Plant dynamics: one scalar ODE per mode, dx/dt = p(t, x), integrated with
// classic fourth-order Runge-Kutta at a fixed number of steps per unit of
// time. Backward reachability uses the time-reversed field
// rev(p)(t, x) = -p(1 - t, x). Interval images map the endpoints through the
// flow, which is exact for the scalar case because distinct trajectories of
// a (locally Lipschitz) scalar ODE cannot cross.
#pragma once

#include <cmath>
#include <memory>
#include <string>

#include "sdsyn/interval.hpp"
#include "sdsyn/parser.hpp"

namespace sdsyn {

struct FlowError : std::runtime_error {
  explicit FlowError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr int kDefaultOdeSteps = 1000;

// Right-hand side expression over time `t` and the plant state variable.
class PlantRhs {
 public:
  double operator()(double t, double x) const { return eval(root_, t, x); }

  static PlantRhs parse(const std::string& text, const std::string& state_var);

  const std::string& source() const { return src_; }

 private:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;
  struct Node {
    enum class Kind { Lit, T, X, Add, Sub, Mul, Div, Log, Neg } kind;
    double lit = 0.0;
    NodePtr a, b;
  };

  static NodePtr mk(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  static double eval(const NodePtr& n, double t, double x) {
    switch (n->kind) {
      case Node::Kind::Lit: return n->lit;
      case Node::Kind::T: return t;
      case Node::Kind::X: return x;
      case Node::Kind::Add: return eval(n->a, t, x) + eval(n->b, t, x);
      case Node::Kind::Sub: return eval(n->a, t, x) - eval(n->b, t, x);
      case Node::Kind::Mul: return eval(n->a, t, x) * eval(n->b, t, x);
      case Node::Kind::Div: return eval(n->a, t, x) / eval(n->b, t, x);
      case Node::Kind::Log: return std::log(eval(n->a, t, x));
      case Node::Kind::Neg: return -eval(n->a, t, x);
    }
    return 0.0;
  }

  struct P {
    Lexer lex;
    std::string sv;
    explicit P(const std::string& s, std::string sv_)
        : lex(s), sv(std::move(sv_)) {}

    NodePtr expr() {
      NodePtr l = term();
      while (true) {
        if (lex.accept_punct("+"))
          l = mk(Node::Kind::Add, l, term());
        else if (lex.accept_punct("-"))
          l = mk(Node::Kind::Sub, l, term());
        else
          return l;
      }
    }
    NodePtr term() {
      NodePtr l = factor();
      while (true) {
        if (lex.accept_punct("*"))
          l = mk(Node::Kind::Mul, l, factor());
        else if (lex.accept_punct("/"))
          l = mk(Node::Kind::Div, l, factor());
        else
          return l;
      }
    }
    NodePtr factor() {
      const Token& t = lex.peek();
      if (t.kind == Token::Kind::Number) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Lit;
        n->lit = lex.next().num;
        return n;
      }
      if (t.kind == Token::Kind::Punct && t.text == "-") {
        lex.next();
        return mk(Node::Kind::Neg, factor());
      }
      if (t.kind == Token::Kind::Punct && t.text == "(") {
        lex.next();
        NodePtr e = expr();
        lex.expect_punct(")");
        return e;
      }
      if (t.kind == Token::Kind::Ident) {
        if (t.text == "log") {
          lex.next();
          lex.expect_punct("(");
          NodePtr e = expr();
          lex.expect_punct(")");
          return mk(Node::Kind::Log, e);
        }
        if (t.text == "t") {
          lex.next();
          return mk(Node::Kind::T);
        }
        if (t.text == sv) {
          lex.next();
          return mk(Node::Kind::X);
        }
        lex.fail("unknown identifier in plant dynamics (state variable is '" +
                 sv + "')");
      }
      lex.fail("expected plant expression");
    }
  };

  NodePtr root_;
  std::string src_;
};

inline PlantRhs PlantRhs::parse(const std::string& text,
                                const std::string& state_var) {
  P p(text, state_var);
  PlantRhs r;
  r.root_ = p.expr();
  r.src_ = text;
  if (!p.lex.at_end()) p.lex.fail("trailing input in plant dynamics");
  return r;
}

// x(tau) from x(0) = x0 under dx/dt = rhs(t, x).
inline double flow(const PlantRhs& rhs, double x0, double tau = 1.0,
                   int steps_per_unit = kDefaultOdeSteps) {
  if (std::isinf(x0)) return x0;  // endpoints at infinity pass through
  int n = std::max(1, static_cast<int>(std::lround(steps_per_unit * tau)));
  double h = tau / n;
  double x = x0, t = 0.0;
  for (int i = 0; i < n; ++i) {
    double k1 = rhs(t, x);
    double k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
    double k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
    double k4 = rhs(t + h, x + h * k3);
    x += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
    if (!std::isfinite(x))
      throw FlowError("plant state diverged while integrating '" +
                      rhs.source() + "'");
  }
  return x;
}

// Flow the time-reversed field; flow_reverse(flow(x)) == x up to the
// integration error.
inline double flow_reverse(const PlantRhs& rhs, double x0, double tau = 1.0,
                           int steps_per_unit = kDefaultOdeSteps) {
  if (std::isinf(x0)) return x0;
  int n = std::max(1, static_cast<int>(std::lround(steps_per_unit * tau)));
  double h = tau / n;
  double x = x0, t = 0.0;
  auto rev = [&](double tt, double xx) { return -rhs(tau - tt, xx); };
  for (int i = 0; i < n; ++i) {
    double k1 = rev(t, x);
    double k2 = rev(t + 0.5 * h, x + 0.5 * h * k1);
    double k3 = rev(t + 0.5 * h, x + 0.5 * h * k2);
    double k4 = rev(t + h, x + h * k3);
    x += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
    if (!std::isfinite(x))
      throw FlowError("plant state diverged while integrating reversed '" +
                      rhs.source() + "'");
  }
  return x;
}

// Endpoint image of an interval under the unit-time flow. Scalar flows are
// order preserving, so the image of an interval is the interval between the
// images of its endpoints.
inline Interval flow_interval(const PlantRhs& rhs, const Interval& iv,
                              bool reverse = false,
                              int steps_per_unit = kDefaultOdeSteps) {
  if (iv.empty()) return Interval::open(1, 0);
  double lo = reverse ? flow_reverse(rhs, iv.lo, 1.0, steps_per_unit)
                      : flow(rhs, iv.lo, 1.0, steps_per_unit);
  double hi = reverse ? flow_reverse(rhs, iv.hi, 1.0, steps_per_unit)
                      : flow(rhs, iv.hi, 1.0, steps_per_unit);
  return Interval::make(lo, iv.lo_open, hi, iv.hi_open);
}

inline IntervalSet flow_interval_set(const PlantRhs& rhs, const IntervalSet& s,
                                     bool reverse = false,
                                     int steps_per_unit = kDefaultOdeSteps) {
  std::vector<Interval> out;
  for (auto& p : s.parts())
    out.push_back(flow_interval(rhs, p, reverse, steps_per_unit));
  return IntervalSet(std::move(out));
}

}  // namespace sdsyn
