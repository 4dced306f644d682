// Pretty-printers. Output reparses to a structurally equal AST.
#pragma once

#include <charconv>
#include <string>

#include "sdsyn/ast.hpp"

namespace sdsyn {

inline std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

// Precedence levels: Add/Sub = 1, Mul = 2, atoms = 3.
inline int prec(AOp op) { return op == AOp::Mul ? 2 : 1; }

inline void print_aexp(const AExpPtr& a, std::string& out, int parent_prec) {
  switch (a->kind) {
    case AExp::Kind::Lit:
      if (a->lit < 0) {
        out += "(";
        out += format_real(a->lit);
        out += ")";
      } else {
        out += format_real(a->lit);
      }
      return;
    case AExp::Kind::ThinkVar:
    case AExp::Kind::LogicalVar: out += a->name; return;
    case AExp::Kind::Bin: {
      int p = prec(a->op);
      bool paren = p < parent_prec;
      if (paren) out += "(";
      print_aexp(a->lhs, out, p);
      out += " ";
      out += to_string(a->op);
      out += " ";
      // Right operand of a left-associative operator needs one level more.
      print_aexp(a->rhs, out, p + 1);
      if (paren) out += ")";
      return;
    }
  }
}

// Boolean precedence: Or = 1, And = 2, Not = 3, atoms = 4.
inline void print_bexp(const BExpPtr& b, std::string& out, int parent_prec) {
  switch (b->kind) {
    case BExp::Kind::True: out += "true"; return;
    case BExp::Kind::False: out += "false"; return;
    case BExp::Kind::Sense: out += b->name; return;
    case BExp::Kind::Cmp:
      if (parent_prec > 3) out += "(";
      print_aexp(b->alhs, out, 0);
      out += " ";
      out += to_string(b->rop);
      out += " ";
      print_aexp(b->arhs, out, 0);
      if (parent_prec > 3) out += ")";
      return;
    case BExp::Kind::Not:
      out += "!";
      print_bexp(b->lhs, out, 4);
      return;
    case BExp::Kind::And: {
      bool paren = parent_prec > 2;
      if (paren) out += "(";
      print_bexp(b->lhs, out, 2);
      out += " && ";
      print_bexp(b->rhs, out, 3);
      if (paren) out += ")";
      return;
    }
    case BExp::Kind::Or: {
      bool paren = parent_prec > 1;
      if (paren) out += "(";
      print_bexp(b->lhs, out, 1);
      out += " || ";
      print_bexp(b->rhs, out, 2);
      if (paren) out += ")";
      return;
    }
  }
}

inline void print_formula(const FormulaPtr& f, std::string& out,
                          int parent_prec) {
  switch (f->kind) {
    case Formula::Kind::True: out += "true"; return;
    case Formula::Kind::False: out += "false"; return;
    case Formula::Kind::Sense: out += f->name; return;
    case Formula::Kind::Cmp:
      if (parent_prec > 3) out += "(";
      print_aexp(f->alhs, out, 0);
      out += " ";
      out += to_string(f->rop);
      out += " ";
      print_aexp(f->arhs, out, 0);
      if (parent_prec > 3) out += ")";
      return;
    case Formula::Kind::ModeEq: {
      if (parent_prec > 3) out += "(";
      auto emit = [&](const ModeExpr& m) {
        out += m.is_act ? "xa" : m.mode;
      };
      emit(f->m1);
      out += " = ";
      emit(f->m2);
      if (parent_prec > 3) out += ")";
      return;
    }
    case Formula::Kind::Not:
      out += "!";
      print_formula(f->lhs, out, 4);
      return;
    case Formula::Kind::And: {
      bool paren = parent_prec > 2;
      if (paren) out += "(";
      print_formula(f->lhs, out, 2);
      out += " && ";
      print_formula(f->rhs, out, 3);
      if (paren) out += ")";
      return;
    }
    case Formula::Kind::Or: {
      bool paren = parent_prec > 1;
      if (paren) out += "(";
      print_formula(f->lhs, out, 1);
      out += " || ";
      print_formula(f->rhs, out, 2);
      if (paren) out += ")";
      return;
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      bool paren = parent_prec > 0;
      if (paren) out += "(";
      out += f->kind == Formula::Kind::Exists ? "exists " : "forall ";
      out += f->name;
      out += ". ";
      print_formula(f->lhs, out, 0);
      if (paren) out += ")";
      return;
    }
  }
}

inline void print_cmd(const CmdPtr& c, std::string& out) {
  switch (c->kind) {
    case Cmd::Kind::Skip: out += "skip"; return;
    case Cmd::Kind::AssignThink:
      out += c->var;
      out += " := ";
      print_aexp(c->aexp, out, 0);
      return;
    case Cmd::Kind::AssignAct:
      out += "xa := ";  // canonical act-variable spelling
      out += c->mode;
      return;
    case Cmd::Kind::Seq:
      print_cmd(c->c1, out);
      out += "; ";
      print_cmd(c->c2, out);
      return;
    case Cmd::Kind::If:
      out += "if ";
      print_bexp(c->guard, out, 0);
      out += " then { ";
      print_cmd(c->c1, out);
      out += " } else { ";
      print_cmd(c->c2, out);
      out += " }";
      return;
  }
}

}  // namespace detail

inline std::string pretty(const AExpPtr& a) {
  std::string s;
  detail::print_aexp(a, s, 0);
  return s;
}
inline std::string pretty(const BExpPtr& b) {
  std::string s;
  detail::print_bexp(b, s, 0);
  return s;
}
inline std::string pretty(const FormulaPtr& f) {
  std::string s;
  detail::print_formula(f, s, 0);
  return s;
}
inline std::string pretty(const CmdPtr& c) {
  std::string s;
  detail::print_cmd(c, s);
  return s;
}

}  // namespace sdsyn
