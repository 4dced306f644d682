// Capture-avoiding substitution on assertion formulas. Four flavours:
// think variable -> arithmetic expression, sense variable -> boolean
// constant, act variable -> mode literal, logical variable -> arithmetic
// expression. Bound logical variables are alpha-renamed when a replacement
// would be captured.
#pragma once

#include <set>
#include <string>

#include "sdsyn/ast.hpp"

namespace sdsyn {

inline void collect_vars(const AExpPtr& a, std::set<std::string>& out) {
  switch (a->kind) {
    case AExp::Kind::Lit: return;
    case AExp::Kind::ThinkVar:
    case AExp::Kind::LogicalVar: out.insert(a->name); return;
    case AExp::Kind::Bin:
      collect_vars(a->lhs, out);
      collect_vars(a->rhs, out);
      return;
  }
}

inline std::set<std::string> vars_of(const AExpPtr& a) {
  std::set<std::string> s;
  collect_vars(a, s);
  return s;
}

// Free arithmetic variables (think + logical) of a formula.
inline void free_vars(const FormulaPtr& f, std::set<std::string>& out) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Sense:
    case Formula::Kind::ModeEq: return;
    case Formula::Kind::Cmp:
      collect_vars(f->alhs, out);
      collect_vars(f->arhs, out);
      return;
    case Formula::Kind::Not: free_vars(f->lhs, out); return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      free_vars(f->lhs, out);
      free_vars(f->rhs, out);
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      std::set<std::string> body;
      free_vars(f->lhs, body);
      body.erase(f->name);
      out.insert(body.begin(), body.end());
      return;
    }
  }
}

inline std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> s;
  free_vars(f, s);
  return s;
}

namespace detail {

inline AExpPtr subst_aexp(const AExpPtr& a, const std::string& var,
                          const AExpPtr& repl) {
  switch (a->kind) {
    case AExp::Kind::Lit: return a;
    case AExp::Kind::ThinkVar:
    case AExp::Kind::LogicalVar: return a->name == var ? repl : a;
    case AExp::Kind::Bin: {
      AExpPtr l = subst_aexp(a->lhs, var, repl);
      AExpPtr r = subst_aexp(a->rhs, var, repl);
      if (l == a->lhs && r == a->rhs) return a;
      return AExp::bin(a->op, l, r);
    }
  }
  return a;
}

// Rename the bound variable of a quantifier node to `fresh`.
inline FormulaPtr rename_bound(const FormulaPtr& q, const std::string& fresh) {
  AExpPtr v = AExp::logical(fresh);
  FormulaPtr body;
  {
    // substitute old bound name in the body
    struct Rec {
      static FormulaPtr go(const FormulaPtr& f, const std::string& var,
                           const AExpPtr& repl) {
        switch (f->kind) {
          case Formula::Kind::True:
          case Formula::Kind::False:
          case Formula::Kind::Sense:
          case Formula::Kind::ModeEq: return f;
          case Formula::Kind::Cmp: {
            AExpPtr l = subst_aexp(f->alhs, var, repl);
            AExpPtr r = subst_aexp(f->arhs, var, repl);
            if (l == f->alhs && r == f->arhs) return f;
            return Formula::cmp(f->rop, l, r);
          }
          case Formula::Kind::Not: {
            FormulaPtr b = go(f->lhs, var, repl);
            return b == f->lhs ? f : Formula::negate(b);
          }
          case Formula::Kind::And:
          case Formula::Kind::Or: {
            FormulaPtr l = go(f->lhs, var, repl);
            FormulaPtr r = go(f->rhs, var, repl);
            if (l == f->lhs && r == f->rhs) return f;
            return f->kind == Formula::Kind::And ? Formula::conj(l, r)
                                                 : Formula::disj(l, r);
          }
          case Formula::Kind::Exists:
          case Formula::Kind::Forall: {
            if (f->name == var) return f;  // shadowed
            FormulaPtr b = go(f->lhs, var, repl);
            if (b == f->lhs) return f;
            return f->kind == Formula::Kind::Exists
                       ? Formula::exists(f->name, b)
                       : Formula::forall(f->name, b);
          }
        }
        return f;
      }
    };
    body = Rec::go(q->lhs, q->name, v);
  }
  return q->kind == Formula::Kind::Exists ? Formula::exists(fresh, body)
                                          : Formula::forall(fresh, body);
}

inline FormulaPtr subst_arith(const FormulaPtr& f, const std::string& var,
                              const AExpPtr& repl, const VarTable& vt) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Sense:
    case Formula::Kind::ModeEq: return f;
    case Formula::Kind::Cmp: {
      AExpPtr l = subst_aexp(f->alhs, var, repl);
      AExpPtr r = subst_aexp(f->arhs, var, repl);
      if (l == f->alhs && r == f->arhs) return f;
      return Formula::cmp(f->rop, l, r);
    }
    case Formula::Kind::Not: {
      FormulaPtr b = subst_arith(f->lhs, var, repl, vt);
      return b == f->lhs ? f : Formula::negate(b);
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      FormulaPtr l = subst_arith(f->lhs, var, repl, vt);
      FormulaPtr r = subst_arith(f->rhs, var, repl, vt);
      if (l == f->lhs && r == f->rhs) return f;
      return f->kind == Formula::Kind::And ? Formula::conj(l, r)
                                           : Formula::disj(l, r);
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      if (f->name == var) return f;  // bound occurrence shadows target
      FormulaPtr node = f;
      if (vars_of(repl).count(f->name)) node = rename_bound(f, vt.fresh_logical());
      FormulaPtr b = subst_arith(node->lhs, var, repl, vt);
      if (b == node->lhs) return node;
      return node->kind == Formula::Kind::Exists
                 ? Formula::exists(node->name, b)
                 : Formula::forall(node->name, b);
    }
  }
  return f;
}

}  // namespace detail

// a[e / x] on arithmetic expressions.
inline AExpPtr substitute_aexp(const AExpPtr& a, const std::string& var,
                               const AExpPtr& repl) {
  return detail::subst_aexp(a, var, repl);
}

// Φ[a / x] for a think or logical variable x.
inline FormulaPtr substitute(const FormulaPtr& f, const std::string& var,
                             const AExpPtr& repl, const VarTable& vt) {
  return detail::subst_arith(f, var, repl, vt);
}

// Φ[b / xs] for a sense variable xs and boolean constant b.
inline FormulaPtr substitute_sense(const FormulaPtr& f, const std::string& var,
                                   bool value) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Cmp:
    case Formula::Kind::ModeEq: return f;
    case Formula::Kind::Sense:
      return f->name == var ? Formula::truth(value) : f;
    case Formula::Kind::Not: {
      FormulaPtr b = substitute_sense(f->lhs, var, value);
      return b == f->lhs ? f : Formula::negate(b);
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      FormulaPtr l = substitute_sense(f->lhs, var, value);
      FormulaPtr r = substitute_sense(f->rhs, var, value);
      if (l == f->lhs && r == f->rhs) return f;
      return f->kind == Formula::Kind::And ? Formula::conj(l, r)
                                           : Formula::disj(l, r);
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      FormulaPtr b = substitute_sense(f->lhs, var, value);
      if (b == f->lhs) return f;
      return f->kind == Formula::Kind::Exists ? Formula::exists(f->name, b)
                                              : Formula::forall(f->name, b);
    }
  }
  return f;
}

// Φ[m / xa]: replace the act variable with a mode literal, deciding mode
// equalities that become ground.
inline FormulaPtr substitute_act(const FormulaPtr& f, const Mode& m) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Sense:
    case Formula::Kind::Cmp: return f;
    case Formula::Kind::ModeEq: {
      ModeExpr a = f->m1.is_act ? ModeExpr::lit(m) : f->m1;
      ModeExpr b = f->m2.is_act ? ModeExpr::lit(m) : f->m2;
      return Formula::truth(a.mode == b.mode);
    }
    case Formula::Kind::Not: {
      FormulaPtr b = substitute_act(f->lhs, m);
      return b == f->lhs ? f : Formula::negate(b);
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      FormulaPtr l = substitute_act(f->lhs, m);
      FormulaPtr r = substitute_act(f->rhs, m);
      if (l == f->lhs && r == f->rhs) return f;
      return f->kind == Formula::Kind::And ? Formula::conj(l, r)
                                           : Formula::disj(l, r);
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      FormulaPtr b = substitute_act(f->lhs, m);
      if (b == f->lhs) return f;
      return f->kind == Formula::Kind::Exists ? Formula::exists(f->name, b)
                                              : Formula::forall(f->name, b);
    }
  }
  return f;
}

}  // namespace sdsyn
