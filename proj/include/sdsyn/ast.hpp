// Core ASTs: arithmetic/boolean expressions, controller commands, and
// assertion formulas, plus the variable table that scopes them.
#pragma once

#include <atomic>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sdsyn {

using Mode = std::string;

// Declared variables of a controller: think (real), sense (boolean), the
// single act variable, and the mode set. Logical variables are machine
// generated ("_v0", "_v1", ...) and never collide with user names.
struct VarTable {
  std::vector<std::string> think_vars;
  std::vector<std::string> sense_vars;
  std::string act_var = "xa";
  std::vector<Mode> modes;

  mutable std::atomic<unsigned> fresh_counter{0};

  VarTable() = default;
  VarTable(const VarTable& o)
      : think_vars(o.think_vars),
        sense_vars(o.sense_vars),
        act_var(o.act_var),
        modes(o.modes),
        fresh_counter(o.fresh_counter.load()) {}
  VarTable& operator=(const VarTable& o) {
    think_vars = o.think_vars;
    sense_vars = o.sense_vars;
    act_var = o.act_var;
    modes = o.modes;
    fresh_counter.store(o.fresh_counter.load());
    return *this;
  }

  bool is_think(const std::string& n) const {
    for (auto& v : think_vars)
      if (v == n) return true;
    return false;
  }
  bool is_sense(const std::string& n) const {
    for (auto& v : sense_vars)
      if (v == n) return true;
    return false;
  }
  bool is_mode(const std::string& n) const {
    for (auto& m : modes)
      if (m == n) return true;
    return false;
  }
  int mode_index(const Mode& m) const {
    for (size_t i = 0; i < modes.size(); ++i)
      if (modes[i] == m) return static_cast<int>(i);
    return -1;
  }
  std::string fresh_logical() const {
    return "_v" + std::to_string(fresh_counter.fetch_add(1));
  }
  static bool is_logical_name(const std::string& n) {
    return n.size() >= 2 && n[0] == '_' && n[1] == 'v';
  }
};

enum class AOp { Add, Sub, Mul };
enum class Rop { Eq, Lt, Le, Gt, Ge };

inline const char* to_string(AOp op) {
  switch (op) {
    case AOp::Add: return "+";
    case AOp::Sub: return "-";
    case AOp::Mul: return "*";
  }
  return "?";
}
inline const char* to_string(Rop r) {
  switch (r) {
    case Rop::Eq: return "=";
    case Rop::Lt: return "<";
    case Rop::Le: return "<=";
    case Rop::Gt: return ">";
    case Rop::Ge: return ">=";
  }
  return "?";
}

struct AExp;
using AExpPtr = std::shared_ptr<const AExp>;

struct AExp {
  enum class Kind { Lit, ThinkVar, LogicalVar, Bin };
  Kind kind;
  double lit = 0.0;
  std::string name;  // ThinkVar / LogicalVar
  AOp op = AOp::Add;
  AExpPtr lhs, rhs;

  static AExpPtr literal(double r) {
    auto e = std::make_shared<AExp>();
    e->kind = Kind::Lit;
    e->lit = r;
    return e;
  }
  static AExpPtr think(std::string n) {
    auto e = std::make_shared<AExp>();
    e->kind = Kind::ThinkVar;
    e->name = std::move(n);
    return e;
  }
  static AExpPtr logical(std::string n) {
    auto e = std::make_shared<AExp>();
    e->kind = Kind::LogicalVar;
    e->name = std::move(n);
    return e;
  }
  static AExpPtr bin(AOp op, AExpPtr a, AExpPtr b) {
    auto e = std::make_shared<AExp>();
    e->kind = Kind::Bin;
    e->op = op;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
  }
};

struct BExp;
using BExpPtr = std::shared_ptr<const BExp>;

struct BExp {
  enum class Kind { True, False, Sense, Cmp, Not, And, Or };
  Kind kind;
  std::string name;  // Sense
  Rop rop = Rop::Eq;
  AExpPtr alhs, arhs;  // Cmp
  BExpPtr lhs, rhs;

  static std::shared_ptr<BExp> mk(Kind k) {
    auto e = std::make_shared<BExp>();
    e->kind = k;
    return e;
  }
  static BExpPtr truth(bool v) { return mk(v ? Kind::True : Kind::False); }
  static BExpPtr sense(std::string n) {
    auto e = mk(Kind::Sense);
    e->name = std::move(n);
    return e;
  }
  static BExpPtr cmp(Rop r, AExpPtr a, AExpPtr b) {
    auto e = mk(Kind::Cmp);
    e->rop = r;
    e->alhs = std::move(a);
    e->arhs = std::move(b);
    return e;
  }
  static BExpPtr negate(BExpPtr b) {
    auto e = mk(Kind::Not);
    e->lhs = std::move(b);
    return e;
  }
  static BExpPtr conj(BExpPtr a, BExpPtr b) {
    auto e = mk(Kind::And);
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
  }
  static BExpPtr disj(BExpPtr a, BExpPtr b) {
    auto e = mk(Kind::Or);
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
  }
};

struct Cmd;
using CmdPtr = std::shared_ptr<const Cmd>;

struct Cmd {
  enum class Kind { Skip, AssignThink, AssignAct, Seq, If };
  Kind kind;
  std::string var;   // AssignThink target
  AExpPtr aexp;      // AssignThink rhs
  Mode mode;         // AssignAct
  BExpPtr guard;     // If
  CmdPtr c1, c2;     // Seq / If branches

  static CmdPtr skip() {
    auto c = std::make_shared<Cmd>();
    c->kind = Kind::Skip;
    return c;
  }
  static CmdPtr assign_think(std::string v, AExpPtr a) {
    auto c = std::make_shared<Cmd>();
    c->kind = Kind::AssignThink;
    c->var = std::move(v);
    c->aexp = std::move(a);
    return c;
  }
  static CmdPtr assign_act(Mode m) {
    auto c = std::make_shared<Cmd>();
    c->kind = Kind::AssignAct;
    c->mode = std::move(m);
    return c;
  }
  static CmdPtr seq(CmdPtr a, CmdPtr b) {
    auto c = std::make_shared<Cmd>();
    c->kind = Kind::Seq;
    c->c1 = std::move(a);
    c->c2 = std::move(b);
    return c;
  }
  static CmdPtr branch(BExpPtr g, CmdPtr t, CmdPtr e) {
    auto c = std::make_shared<Cmd>();
    c->kind = Kind::If;
    c->guard = std::move(g);
    c->c1 = std::move(t);
    c->c2 = std::move(e);
    return c;
  }
};

// Mode expression of the assertion language: either a literal mode or the
// act variable.
struct ModeExpr {
  bool is_act = false;
  Mode mode;  // valid when !is_act

  static ModeExpr act() {
    ModeExpr m;
    m.is_act = true;
    return m;
  }
  static ModeExpr lit(Mode mo) {
    ModeExpr m;
    m.mode = std::move(mo);
    return m;
  }
  bool operator==(const ModeExpr& o) const {
    return is_act == o.is_act && (is_act || mode == o.mode);
  }
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind {
    True,
    False,
    Sense,
    Cmp,
    ModeEq,
    Not,
    And,
    Or,
    Exists,
    Forall
  };
  Kind kind;
  std::string name;  // Sense var, or bound logical var for quantifiers
  Rop rop = Rop::Eq;
  AExpPtr alhs, arhs;  // Cmp
  ModeExpr m1, m2;     // ModeEq
  FormulaPtr lhs, rhs;

  static std::shared_ptr<Formula> mk(Kind k) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    return f;
  }
  static FormulaPtr truth(bool v) { return mk(v ? Kind::True : Kind::False); }
  static FormulaPtr sense(std::string n) {
    auto f = mk(Kind::Sense);
    f->name = std::move(n);
    return f;
  }
  static FormulaPtr cmp(Rop r, AExpPtr a, AExpPtr b) {
    auto f = mk(Kind::Cmp);
    f->rop = r;
    f->alhs = std::move(a);
    f->arhs = std::move(b);
    return f;
  }
  static FormulaPtr mode_eq(ModeExpr a, ModeExpr b) {
    auto f = mk(Kind::ModeEq);
    f->m1 = std::move(a);
    f->m2 = std::move(b);
    return f;
  }
  static FormulaPtr negate(FormulaPtr a) {
    auto f = mk(Kind::Not);
    f->lhs = std::move(a);
    return f;
  }
  static FormulaPtr conj(FormulaPtr a, FormulaPtr b) {
    auto f = mk(Kind::And);
    f->lhs = std::move(a);
    f->rhs = std::move(b);
    return f;
  }
  static FormulaPtr disj(FormulaPtr a, FormulaPtr b) {
    auto f = mk(Kind::Or);
    f->lhs = std::move(a);
    f->rhs = std::move(b);
    return f;
  }
  static FormulaPtr exists(std::string v, FormulaPtr body) {
    auto f = mk(Kind::Exists);
    f->name = std::move(v);
    f->lhs = std::move(body);
    return f;
  }
  static FormulaPtr forall(std::string v, FormulaPtr body) {
    auto f = mk(Kind::Forall);
    f->name = std::move(v);
    f->lhs = std::move(body);
    return f;
  }
};

// Structural equality -------------------------------------------------------

inline bool equal(const AExpPtr& a, const AExpPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case AExp::Kind::Lit: return a->lit == b->lit;
    case AExp::Kind::ThinkVar:
    case AExp::Kind::LogicalVar: return a->name == b->name;
    case AExp::Kind::Bin:
      return a->op == b->op && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
  return false;
}

inline bool equal(const BExpPtr& a, const BExpPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case BExp::Kind::True:
    case BExp::Kind::False: return true;
    case BExp::Kind::Sense: return a->name == b->name;
    case BExp::Kind::Cmp:
      return a->rop == b->rop && equal(a->alhs, b->alhs) &&
             equal(a->arhs, b->arhs);
    case BExp::Kind::Not: return equal(a->lhs, b->lhs);
    case BExp::Kind::And:
    case BExp::Kind::Or:
      return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
  return false;
}

inline bool equal(const CmdPtr& a, const CmdPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Cmd::Kind::Skip: return true;
    case Cmd::Kind::AssignThink:
      return a->var == b->var && equal(a->aexp, b->aexp);
    case Cmd::Kind::AssignAct: return a->mode == b->mode;
    case Cmd::Kind::Seq: return equal(a->c1, b->c1) && equal(a->c2, b->c2);
    case Cmd::Kind::If:
      return equal(a->guard, b->guard) && equal(a->c1, b->c1) &&
             equal(a->c2, b->c2);
  }
  return false;
}

inline bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False: return true;
    case Formula::Kind::Sense: return a->name == b->name;
    case Formula::Kind::Cmp:
      return a->rop == b->rop && equal(a->alhs, b->alhs) &&
             equal(a->arhs, b->arhs);
    case Formula::Kind::ModeEq: return a->m1 == b->m1 && a->m2 == b->m2;
    case Formula::Kind::Not: return equal(a->lhs, b->lhs);
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      return a->name == b->name && equal(a->lhs, b->lhs);
  }
  return false;
}

// Conversion of a controller boolean expression into an assertion formula
// (used by the wp/sp rules for conditionals).
inline FormulaPtr to_formula(const BExpPtr& b) {
  switch (b->kind) {
    case BExp::Kind::True: return Formula::truth(true);
    case BExp::Kind::False: return Formula::truth(false);
    case BExp::Kind::Sense: return Formula::sense(b->name);
    case BExp::Kind::Cmp: return Formula::cmp(b->rop, b->alhs, b->arhs);
    case BExp::Kind::Not: return Formula::negate(to_formula(b->lhs));
    case BExp::Kind::And:
      return Formula::conj(to_formula(b->lhs), to_formula(b->rhs));
    case BExp::Kind::Or:
      return Formula::disj(to_formula(b->lhs), to_formula(b->rhs));
  }
  throw std::logic_error("to_formula: bad BExp kind");
}

inline bool is_quantifier_free(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: return false;
    case Formula::Kind::Not: return is_quantifier_free(f->lhs);
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return is_quantifier_free(f->lhs) && is_quantifier_free(f->rhs);
    default: return true;
  }
}

}  // namespace sdsyn
