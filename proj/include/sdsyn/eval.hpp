// Concrete semantics: controller stores, big-step command execution, and
// satisfaction of quantifier-free formulas. Equality on reals is tested with
// a small absolute tolerance so that synthesized values survive round-trips
// through text.
#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "sdsyn/ast.hpp"

namespace sdsyn {

inline constexpr double kEqTol = 1e-9;

// A controller store: real-valued think variables, boolean sense variables,
// and the current mode of the act variable.
struct Valuation {
  std::map<std::string, double> think;
  std::map<std::string, bool> sense;
  Mode act;

  bool operator==(const Valuation& o) const = default;
};

// Assignment of the logical variables appearing free in a formula.
using LogicalEnv = std::map<std::string, double>;

inline double eval_aexp(const AExpPtr& a, const Valuation& sigma,
                        const LogicalEnv& env = {}) {
  switch (a->kind) {
    case AExp::Kind::Lit: return a->lit;
    case AExp::Kind::ThinkVar: {
      auto it = sigma.think.find(a->name);
      if (it == sigma.think.end())
        throw std::runtime_error("unbound think variable: " + a->name);
      return it->second;
    }
    case AExp::Kind::LogicalVar: {
      auto it = env.find(a->name);
      if (it == env.end())
        throw std::runtime_error("unbound logical variable: " + a->name);
      return it->second;
    }
    case AExp::Kind::Bin: {
      double l = eval_aexp(a->lhs, sigma, env);
      double r = eval_aexp(a->rhs, sigma, env);
      switch (a->op) {
        case AOp::Add: return l + r;
        case AOp::Sub: return l - r;
        case AOp::Mul: return l * r;
      }
    }
  }
  throw std::logic_error("eval_aexp: bad kind");
}

inline bool compare(Rop r, double l, double rhs) {
  switch (r) {
    case Rop::Eq: return std::fabs(l - rhs) <= kEqTol;
    case Rop::Lt: return l < rhs;
    case Rop::Le: return l <= rhs;
    case Rop::Gt: return l > rhs;
    case Rop::Ge: return l >= rhs;
  }
  return false;
}

inline bool eval_bexp(const BExpPtr& b, const Valuation& sigma) {
  switch (b->kind) {
    case BExp::Kind::True: return true;
    case BExp::Kind::False: return false;
    case BExp::Kind::Sense: {
      auto it = sigma.sense.find(b->name);
      if (it == sigma.sense.end())
        throw std::runtime_error("unbound sense variable: " + b->name);
      return it->second;
    }
    case BExp::Kind::Cmp:
      return compare(b->rop, eval_aexp(b->alhs, sigma),
                     eval_aexp(b->arhs, sigma));
    case BExp::Kind::Not: return !eval_bexp(b->lhs, sigma);
    case BExp::Kind::And:
      return eval_bexp(b->lhs, sigma) && eval_bexp(b->rhs, sigma);
    case BExp::Kind::Or:
      return eval_bexp(b->lhs, sigma) || eval_bexp(b->rhs, sigma);
  }
  throw std::logic_error("eval_bexp: bad kind");
}

// Big-step execution. Commands always terminate (no loops).
inline Valuation exec_cmd(const CmdPtr& c, Valuation sigma) {
  switch (c->kind) {
    case Cmd::Kind::Skip: return sigma;
    case Cmd::Kind::AssignThink:
      sigma.think[c->var] = eval_aexp(c->aexp, sigma);
      return sigma;
    case Cmd::Kind::AssignAct:
      sigma.act = c->mode;
      return sigma;
    case Cmd::Kind::Seq: return exec_cmd(c->c2, exec_cmd(c->c1, sigma));
    case Cmd::Kind::If:
      return eval_bexp(c->guard, sigma) ? exec_cmd(c->c1, sigma)
                                        : exec_cmd(c->c2, sigma);
  }
  throw std::logic_error("exec_cmd: bad kind");
}

// σ, γ ⊨ Φ for quantifier-free Φ. (Quantified formulas are decided
// symbolically; see the logic module.)
inline bool holds_qf(const FormulaPtr& f, const Valuation& sigma,
                     const LogicalEnv& env = {}) {
  switch (f->kind) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Sense: {
      auto it = sigma.sense.find(f->name);
      if (it == sigma.sense.end())
        throw std::runtime_error("unbound sense variable: " + f->name);
      return it->second;
    }
    case Formula::Kind::Cmp:
      return compare(f->rop, eval_aexp(f->alhs, sigma, env),
                     eval_aexp(f->arhs, sigma, env));
    case Formula::Kind::ModeEq: {
      auto val = [&](const ModeExpr& m) { return m.is_act ? sigma.act : m.mode; };
      return val(f->m1) == val(f->m2);
    }
    case Formula::Kind::Not: return !holds_qf(f->lhs, sigma, env);
    case Formula::Kind::And:
      return holds_qf(f->lhs, sigma, env) && holds_qf(f->rhs, sigma, env);
    case Formula::Kind::Or:
      return holds_qf(f->lhs, sigma, env) || holds_qf(f->rhs, sigma, env);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      throw std::runtime_error("holds_qf: formula has quantifiers");
  }
  throw std::logic_error("holds_qf: bad kind");
}

}  // namespace sdsyn
