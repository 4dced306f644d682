// Symbolic kernel for the assertion language. Quantifier-free formulas are
// normalized into a disjunction of conjuncts, each holding linear atoms over
// the real variables, a partial assignment of the sense variables, and the
// set of modes the act variable may take. Satisfiability and variable
// elimination use Fourier-Motzkin with strictness tracking; equalities are
// removed by the one-point rule. On top of that sit quantifier elimination,
// entailment, simplification, projections, model extraction, and the
// weakest-precondition / strongest-postcondition transformers.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sdsyn/ast.hpp"
#include "sdsyn/eval.hpp"
#include "sdsyn/interval.hpp"
#include "sdsyn/subst.hpp"

namespace sdsyn {

struct NonlinearError : std::runtime_error {
  explicit NonlinearError(const std::string& msg) : std::runtime_error(msg) {}
};

// Tolerance used when deciding ground linear facts produced by elimination;
// absorbs floating-point drift without changing any exact comparison of the
// magnitudes that occur in practice.
inline constexpr double kLinTol = 1e-9;

// --- linear forms ----------------------------------------------------------

// Sum of coeff * var plus a constant.
struct LinearForm {
  std::map<std::string, double> coef;
  double cst = 0.0;

  double coeff_of(const std::string& v) const {
    auto it = coef.find(v);
    return it == coef.end() ? 0.0 : it->second;
  }
  bool is_const() const { return coef.empty(); }

  void add_term(const std::string& v, double a) {
    double& c = coef[v];
    c += a;
    if (c == 0.0) coef.erase(v);
  }
  LinearForm& operator+=(const LinearForm& o) {
    for (auto& [v, a] : o.coef) add_term(v, a);
    cst += o.cst;
    return *this;
  }
  LinearForm scaled(double k) const {
    LinearForm r;
    if (k == 0.0) return r;
    for (auto& [v, a] : coef) r.coef[v] = a * k;
    r.cst = cst * k;
    return r;
  }
  LinearForm minus(const LinearForm& o) const {
    LinearForm r = *this;
    r += o.scaled(-1.0);
    return r;
  }
  LinearForm without(const std::string& v) const {
    LinearForm r = *this;
    r.coef.erase(v);
    return r;
  }
  void plug(const std::string& v, double val) {
    auto it = coef.find(v);
    if (it == coef.end()) return;
    cst += it->second * val;
    coef.erase(it);
  }
};

inline LinearForm linearize(const AExpPtr& a) {
  switch (a->kind) {
    case AExp::Kind::Lit: {
      LinearForm r;
      r.cst = a->lit;
      return r;
    }
    case AExp::Kind::ThinkVar:
    case AExp::Kind::LogicalVar: {
      LinearForm r;
      r.coef[a->name] = 1.0;
      return r;
    }
    case AExp::Kind::Bin: {
      LinearForm l = linearize(a->lhs);
      LinearForm r = linearize(a->rhs);
      switch (a->op) {
        case AOp::Add: l += r; return l;
        case AOp::Sub: l += r.scaled(-1.0); return l;
        case AOp::Mul:
          if (l.is_const()) return r.scaled(l.cst);
          if (r.is_const()) return l.scaled(r.cst);
          throw NonlinearError("product of two non-constant expressions");
      }
    }
  }
  throw std::logic_error("linearize: bad kind");
}

// --- DNF -------------------------------------------------------------------

enum class LinRel { Eq, Lt, Le };

// lf rel 0
struct LinAtom {
  LinearForm lf;
  LinRel rel = LinRel::Le;
};

struct Conjunct {
  std::vector<LinAtom> atoms;
  std::map<std::string, bool> sense;  // pinned sense literals
  std::set<Mode> modes;               // allowed values of the act variable

  std::set<std::string> real_vars() const {
    std::set<std::string> vs;
    for (auto& a : atoms)
      for (auto& [v, _] : a.lf.coef) vs.insert(v);
    return vs;
  }
};

using Dnf = std::vector<Conjunct>;

namespace detail {

inline std::set<Mode> all_modes(const VarTable& vt) {
  return std::set<Mode>(vt.modes.begin(), vt.modes.end());
}

inline Conjunct true_conjunct(const VarTable& vt) {
  Conjunct c;
  c.modes = all_modes(vt);
  return c;
}

// nullopt when the merge is contradictory.
inline std::optional<Conjunct> merge(const Conjunct& a, const Conjunct& b) {
  Conjunct r = a;
  r.atoms.insert(r.atoms.end(), b.atoms.begin(), b.atoms.end());
  for (auto& [v, val] : b.sense) {
    auto it = r.sense.find(v);
    if (it != r.sense.end() && it->second != val) return std::nullopt;
    r.sense[v] = val;
  }
  std::set<Mode> inter;
  for (auto& m : r.modes)
    if (b.modes.count(m)) inter.insert(m);
  if (inter.empty()) return std::nullopt;
  r.modes = std::move(inter);
  return r;
}

inline std::vector<LinAtom> negated(const LinAtom& a) {
  switch (a.rel) {
    case LinRel::Eq:
      return {{a.lf, LinRel::Lt}, {a.lf.scaled(-1.0), LinRel::Lt}};
    case LinRel::Lt: return {{a.lf.scaled(-1.0), LinRel::Le}};
    case LinRel::Le: return {{a.lf.scaled(-1.0), LinRel::Lt}};
  }
  return {};
}

inline bool ground_holds(const LinAtom& a) {
  double c = a.lf.cst;
  switch (a.rel) {
    case LinRel::Eq: return std::fabs(c) <= kLinTol;
    case LinRel::Le: return c <= kLinTol;
    // Strict atoms reject the whole tolerance band around zero; otherwise
    // an equality and its negation would both hold on tiny residues.
    case LinRel::Lt: return c < -kLinTol;
  }
  return false;
}

// to_dnf over quantifier-free formulas; `neg` pushes a pending negation.
inline Dnf to_dnf(const FormulaPtr& f, const VarTable& vt, bool neg) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False: {
      bool val = (f->kind == Formula::Kind::True) != neg;
      return val ? Dnf{true_conjunct(vt)} : Dnf{};
    }
    case Formula::Kind::Sense: {
      Conjunct c = true_conjunct(vt);
      c.sense[f->name] = !neg;
      return {c};
    }
    case Formula::Kind::Cmp: {
      LinearForm lf = linearize(f->alhs).minus(linearize(f->arhs));
      LinAtom a;
      switch (f->rop) {
        case Rop::Eq: a = {lf, LinRel::Eq}; break;
        case Rop::Lt: a = {lf, LinRel::Lt}; break;
        case Rop::Le: a = {lf, LinRel::Le}; break;
        case Rop::Gt: a = {lf.scaled(-1.0), LinRel::Lt}; break;
        case Rop::Ge: a = {lf.scaled(-1.0), LinRel::Le}; break;
      }
      Dnf out;
      if (!neg) {
        Conjunct c = true_conjunct(vt);
        c.atoms.push_back(a);
        out.push_back(c);
      } else {
        for (auto& na : negated(a)) {
          Conjunct c = true_conjunct(vt);
          c.atoms.push_back(na);
          out.push_back(c);
        }
      }
      return out;
    }
    case Formula::Kind::ModeEq: {
      const ModeExpr &m1 = f->m1, &m2 = f->m2;
      if (m1.is_act && m2.is_act)
        return neg ? Dnf{} : Dnf{true_conjunct(vt)};
      if (!m1.is_act && !m2.is_act) {
        bool val = (m1.mode == m2.mode) != neg;
        return val ? Dnf{true_conjunct(vt)} : Dnf{};
      }
      const Mode& m = m1.is_act ? m2.mode : m1.mode;
      Conjunct c = true_conjunct(vt);
      if (!neg) {
        c.modes.clear();
        if (vt.is_mode(m)) c.modes.insert(m);
      } else {
        c.modes.erase(m);
      }
      return c.modes.empty() ? Dnf{} : Dnf{c};
    }
    case Formula::Kind::Not: return to_dnf(f->lhs, vt, !neg);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      bool conj = (f->kind == Formula::Kind::And) != neg;
      Dnf l = to_dnf(f->lhs, vt, neg);
      Dnf r = to_dnf(f->rhs, vt, neg);
      if (!conj) {
        l.insert(l.end(), r.begin(), r.end());
        return l;
      }
      Dnf out;
      for (auto& a : l)
        for (auto& b : r)
          if (auto m = merge(a, b)) out.push_back(*m);
      return out;
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      throw std::runtime_error("to_dnf: formula has quantifiers");
  }
  throw std::logic_error("to_dnf: bad kind");
}

// Eliminate one real variable from a conjunct (one-point rule when an
// equality pins it, otherwise Fourier-Motzkin).
inline Conjunct eliminate(const Conjunct& c, const std::string& var) {
  // one-point rule
  for (size_t i = 0; i < c.atoms.size(); ++i) {
    const LinAtom& a = c.atoms[i];
    double k = a.lf.coeff_of(var);
    if (a.rel == LinRel::Eq && k != 0.0) {
      LinearForm expr = a.lf.without(var).scaled(-1.0 / k);  // var = expr
      Conjunct r;
      r.sense = c.sense;
      r.modes = c.modes;
      for (size_t j = 0; j < c.atoms.size(); ++j) {
        if (j == i) continue;
        LinAtom b = c.atoms[j];
        double kb = b.lf.coeff_of(var);
        if (kb != 0.0) {
          LinearForm nl = b.lf.without(var);
          nl += expr.scaled(kb);
          b.lf = nl;
        }
        r.atoms.push_back(b);
      }
      return r;
    }
  }
  Conjunct r;
  r.sense = c.sense;
  r.modes = c.modes;
  // bound = (B, strict): lower means var >(=) B, upper means var <(=) B
  struct Bound {
    LinearForm b;
    bool strict;
  };
  std::vector<Bound> lowers, uppers;
  for (auto& a : c.atoms) {
    double k = a.lf.coeff_of(var);
    if (k == 0.0) {
      r.atoms.push_back(a);
      continue;
    }
    LinearForm b = a.lf.without(var).scaled(-1.0 / k);
    bool strict = a.rel == LinRel::Lt;
    if (k > 0)
      uppers.push_back({b, strict});
    else
      lowers.push_back({b, strict});
  }
  for (auto& lo : lowers)
    for (auto& up : uppers) {
      LinAtom a;
      a.lf = lo.b.minus(up.b);  // lower - upper <= 0
      a.rel = (lo.strict || up.strict) ? LinRel::Lt : LinRel::Le;
      r.atoms.push_back(a);
    }
  return r;
}

inline bool feasible(const Conjunct& c) {
  if (c.modes.empty()) return false;
  Conjunct cur = c;
  for (auto& v : c.real_vars()) cur = eliminate(cur, v);
  for (auto& a : cur.atoms)
    if (!ground_holds(a)) return false;
  return true;
}

// Interval of `var` in a conjunct whose atoms mention only `var`.
inline Interval single_var_interval(const Conjunct& c, const std::string& var) {
  Interval iv = Interval::all();
  for (auto& a : c.atoms) {
    double k = a.lf.coeff_of(var);
    if (k == 0.0) {
      if (!ground_holds(a)) return Interval::open(1, 0);  // empty
      continue;
    }
    double b = -a.lf.cst / k;  // var rel' b
    bool upper = k > 0;
    if (a.rel == LinRel::Eq) {
      Interval pin = Interval::point(b);
      auto r = iv.intersect(pin);
      if (!r) return Interval::open(1, 0);
      iv = *r;
      continue;
    }
    bool strict = a.rel == LinRel::Lt;
    Interval half = upper ? Interval::make(-kInf, true, b, strict)
                          : Interval::make(b, strict, kInf, true);
    auto r = iv.intersect(half);
    if (!r) return Interval::open(1, 0);
    iv = *r;
  }
  return iv;
}

// Project a conjunct onto one variable by eliminating all the others.
inline Interval project_interval(const Conjunct& c, const std::string& var) {
  Conjunct cur = c;
  for (auto& v : c.real_vars())
    if (v != var) cur = eliminate(cur, v);
  return single_var_interval(cur, var);
}

// Canonical scaling for atom comparison: positive leading coefficient of
// magnitude one (equalities may flip sign freely).
inline void canonicalize(LinAtom& a) {
  for (auto it = a.lf.coef.begin(); it != a.lf.coef.end();) {
    if (std::fabs(it->second) <= 1e-12)
      it = a.lf.coef.erase(it);
    else
      ++it;
  }
  if (a.lf.coef.empty()) return;
  double lead = a.lf.coef.begin()->second;
  double k = a.rel == LinRel::Eq ? 1.0 / lead : 1.0 / std::fabs(lead);
  a.lf = a.lf.scaled(k);
}

inline std::string atom_key(const LinAtom& a) {
  std::string s;
  switch (a.rel) {
    case LinRel::Eq: s = "=:"; break;
    case LinRel::Lt: s = "<:"; break;
    case LinRel::Le: s = "≤:"; break;
  }
  char buf[64];
  for (auto& [v, c] : a.lf.coef) {
    std::snprintf(buf, sizeof(buf), "%.12g*%s ", c, v.c_str());
    s += buf;
  }
  std::snprintf(buf, sizeof(buf), "| %.12g", a.lf.cst);
  s += buf;
  return s;
}

inline std::string conjunct_key_no_modes(const Conjunct& c) {
  std::vector<std::string> keys;
  for (auto& a : c.atoms) keys.push_back(atom_key(a));
  std::sort(keys.begin(), keys.end());
  std::string s;
  for (auto& k : keys) {
    s += k;
    s += ";";
  }
  s += "|S";
  for (auto& [v, b] : c.sense) {
    s += b ? "+" : "-";
    s += v;
  }
  return s;
}

// Does the conjunct entail the atom?
inline bool entails_atom(const Conjunct& c, const LinAtom& a) {
  for (auto& na : negated(a)) {
    Conjunct probe = c;
    probe.atoms.push_back(na);
    if (feasible(probe)) return false;
  }
  return true;
}

inline AExpPtr var_node(const std::string& v, const VarTable& vt) {
  return vt.is_think(v) ? AExp::think(v) : AExp::logical(v);
}

inline FormulaPtr atom_to_formula(const LinAtom& a, const VarTable& vt) {
  Rop r = a.rel == LinRel::Eq ? Rop::Eq
          : a.rel == LinRel::Lt ? Rop::Lt
                                : Rop::Le;
  if (a.lf.coef.empty())
    return Formula::truth(ground_holds(a));
  AExpPtr lhs;
  for (auto& [v, c] : a.lf.coef) {
    AExpPtr term = c == 1.0 ? var_node(v, vt)
                            : AExp::bin(AOp::Mul, AExp::literal(c),
                                        var_node(v, vt));
    lhs = lhs ? AExp::bin(AOp::Add, lhs, term) : term;
  }
  return Formula::cmp(r, lhs, AExp::literal(-a.lf.cst));
}

inline FormulaPtr conjunct_to_formula(const Conjunct& c, const VarTable& vt) {
  FormulaPtr f;
  auto push = [&](FormulaPtr g) { f = f ? Formula::conj(f, g) : g; };
  for (auto& a : c.atoms) push(atom_to_formula(a, vt));
  for (auto& [v, b] : c.sense)
    push(b ? Formula::sense(v) : Formula::negate(Formula::sense(v)));
  if (c.modes.size() != vt.modes.size()) {
    FormulaPtr md;
    for (auto& m : vt.modes) {  // declared order
      if (!c.modes.count(m)) continue;
      FormulaPtr eq = Formula::mode_eq(ModeExpr::act(), ModeExpr::lit(m));
      md = md ? Formula::disj(md, eq) : eq;
    }
    push(md ? md : Formula::truth(false));
  }
  return f ? f : Formula::truth(true);
}

inline FormulaPtr dnf_to_formula(const Dnf& d, const VarTable& vt) {
  FormulaPtr f;
  for (auto& c : d) {
    FormulaPtr g = conjunct_to_formula(c, vt);
    f = f ? Formula::disj(f, g) : g;
  }
  return f ? f : Formula::truth(false);
}

}  // namespace detail

// --- quantifier elimination ------------------------------------------------

inline FormulaPtr qelim(const FormulaPtr& f, const VarTable& vt);

namespace detail {

inline FormulaPtr eliminate_exists(const std::string& var, const FormulaPtr& qf,
                                   const VarTable& vt) {
  Dnf d = to_dnf(qf, vt, false);
  Dnf out;
  for (auto& c : d) {
    Conjunct e = eliminate(c, var);
    if (feasible(e)) out.push_back(e);
  }
  return dnf_to_formula(out, vt);
}

}  // namespace detail

inline FormulaPtr qelim(const FormulaPtr& f, const VarTable& vt) {
  switch (f->kind) {
    case Formula::Kind::Exists:
      return detail::eliminate_exists(f->name, qelim(f->lhs, vt), vt);
    case Formula::Kind::Forall: {
      // ∀v.Φ  =  ¬∃v.¬Φ
      FormulaPtr inner =
          detail::eliminate_exists(f->name, qelim(Formula::negate(f->lhs), vt),
                                   vt);
      // inner is quantifier free; push the outer negation through DNF.
      return detail::dnf_to_formula(
          detail::to_dnf(inner, vt, true), vt);
    }
    case Formula::Kind::Not: {
      FormulaPtr b = qelim(f->lhs, vt);
      return b == f->lhs ? f : Formula::negate(b);
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      FormulaPtr l = qelim(f->lhs, vt);
      FormulaPtr r = qelim(f->rhs, vt);
      if (l == f->lhs && r == f->rhs) return f;
      return f->kind == Formula::Kind::And ? Formula::conj(l, r)
                                           : Formula::disj(l, r);
    }
    default: return f;
  }
}

inline Dnf to_dnf(const FormulaPtr& f, const VarTable& vt) {
  return detail::to_dnf(qelim(f, vt), vt, false);
}

// --- decision procedures ---------------------------------------------------

inline bool is_satisfiable(const FormulaPtr& f, const VarTable& vt) {
  for (auto& c : to_dnf(f, vt))
    if (detail::feasible(c)) return true;
  return false;
}

// f ⇒ g
inline bool entails(const FormulaPtr& f, const FormulaPtr& g,
                    const VarTable& vt) {
  return !is_satisfiable(Formula::conj(f, Formula::negate(g)), vt);
}

inline bool equivalent(const FormulaPtr& f, const FormulaPtr& g,
                       const VarTable& vt) {
  return entails(f, g, vt) && entails(g, f, vt);
}

// --- simplification --------------------------------------------------------

inline FormulaPtr simplify(const FormulaPtr& f, const VarTable& vt) {
  Dnf d = to_dnf(f, vt);
  Dnf live;
  for (auto& c : d) {
    if (!detail::feasible(c)) continue;
    Conjunct out;
    out.sense = c.sense;
    out.modes = c.modes;
    // canonical, deduplicated atoms
    std::set<std::string> seen;
    for (auto a : c.atoms) {
      detail::canonicalize(a);
      if (a.lf.coef.empty()) continue;  // ground and feasible, hence true
      std::string k = detail::atom_key(a);
      if (seen.insert(k).second) out.atoms.push_back(a);
    }
    // drop atoms entailed by the rest
    for (size_t i = 0; i < out.atoms.size();) {
      Conjunct rest = out;
      rest.atoms.erase(rest.atoms.begin() + i);
      if (detail::entails_atom(rest, out.atoms[i]))
        out = rest;
      else
        ++i;
    }
    std::sort(out.atoms.begin(), out.atoms.end(),
              [](const LinAtom& a, const LinAtom& b) {
                return detail::atom_key(a) < detail::atom_key(b);
              });
    live.push_back(out);
  }
  // merge conjuncts that differ only in their mode sets
  std::map<std::string, size_t> index;
  Dnf merged;
  for (auto& c : live) {
    std::string k = detail::conjunct_key_no_modes(c);
    auto it = index.find(k);
    if (it != index.end()) {
      merged[it->second].modes.insert(c.modes.begin(), c.modes.end());
    } else {
      index[k] = merged.size();
      merged.push_back(c);
    }
  }
  // drop conjuncts implied by another one
  auto implies = [&](const Conjunct& a, const Conjunct& b) {
    // a ⇒ b, checked structurally
    for (auto& [v, val] : b.sense) {
      auto it = a.sense.find(v);
      if (it == a.sense.end() || it->second != val) return false;
    }
    for (auto& m : a.modes)
      if (!b.modes.count(m)) return false;
    for (auto& atom : b.atoms)
      if (!detail::entails_atom(a, atom)) return false;
    return true;
  };
  std::vector<bool> dead(merged.size(), false);
  for (size_t i = 0; i < merged.size(); ++i)
    for (size_t j = 0; j < merged.size(); ++j) {
      if (i == j || dead[i] || dead[j]) continue;
      if (implies(merged[i], merged[j])) dead[i] = true;
    }
  Dnf final_;
  for (size_t i = 0; i < merged.size(); ++i)
    if (!dead[i]) final_.push_back(merged[i]);
  return detail::dnf_to_formula(final_, vt);
}

// --- projections -----------------------------------------------------------

// Existentially forget all sense variables.
inline FormulaPtr project_sense(const FormulaPtr& f, const VarTable& vt) {
  Dnf d = to_dnf(f, vt);
  for (auto& c : d) c.sense.clear();
  return simplify(detail::dnf_to_formula(d, vt), vt);
}

// Existentially forget the act variable.
inline FormulaPtr project_act(const FormulaPtr& f, const VarTable& vt) {
  Dnf d = to_dnf(f, vt);
  for (auto& c : d) c.modes = detail::all_modes(vt);
  return simplify(detail::dnf_to_formula(d, vt), vt);
}

// Region of one real variable consistent with the formula.
inline IntervalSet var_region(const FormulaPtr& f, const std::string& var,
                              const VarTable& vt) {
  IntervalSet out;
  for (auto& c : to_dnf(f, vt)) {
    if (!detail::feasible(c)) continue;
    out = out.unite(IntervalSet(detail::project_interval(c, var)));
  }
  return out;
}

// --- model extraction ------------------------------------------------------

struct Model {
  std::map<std::string, double> reals;
  std::map<std::string, bool> sense;
  std::set<Mode> modes;  // any member satisfies the conjunct
};

namespace detail {

inline std::optional<std::map<std::string, double>> conjunct_model(
    const Conjunct& c0) {
  std::set<std::string> var_set = c0.real_vars();
  std::vector<std::string> vars(var_set.begin(), var_set.end());
  size_t n = vars.size();
  std::vector<Conjunct> sys(n + 1);
  sys[n] = c0;
  for (size_t i = n; i-- > 0;) sys[i] = eliminate(sys[i + 1], vars[i]);
  for (auto& a : sys[0].atoms)
    if (!ground_holds(a)) return std::nullopt;
  std::map<std::string, double> m;
  for (size_t i = 0; i < n; ++i) {
    Conjunct s = sys[i + 1];
    for (auto& a : s.atoms)
      for (auto& [v, val] : m) a.lf.plug(v, val);
    Interval iv = single_var_interval(s, vars[i]);
    if (iv.empty()) return std::nullopt;
    m[vars[i]] = iv.pick();
  }
  return m;
}

}  // namespace detail

inline std::optional<Model> find_model(const FormulaPtr& f,
                                       const VarTable& vt) {
  for (auto& c : to_dnf(simplify(f, vt), vt)) {
    if (!detail::feasible(c)) continue;
    auto reals = detail::conjunct_model(c);
    if (!reals) continue;
    Model m;
    m.reals = *reals;
    m.sense = c.sense;
    m.modes = c.modes;
    return m;
  }
  return std::nullopt;
}

// Full satisfaction check: plug a store into the formula and decide what
// remains (quantifiers over logical variables are eliminated symbolically).
inline bool holds(const FormulaPtr& f, const Valuation& sigma,
                  const VarTable& vt) {
  FormulaPtr g = f;
  for (auto& [v, val] : sigma.think)
    g = substitute(g, v, AExp::literal(val), vt);
  for (auto& [v, val] : sigma.sense) g = substitute_sense(g, v, val);
  if (!sigma.act.empty()) g = substitute_act(g, sigma.act);
  return is_satisfiable(g, vt);
}

// --- predicate transformers ------------------------------------------------

// Weakest precondition of a controller command.
inline FormulaPtr wp(const CmdPtr& c, const FormulaPtr& post,
                     const VarTable& vt) {
  switch (c->kind) {
    case Cmd::Kind::Skip: return post;
    case Cmd::Kind::AssignThink: return substitute(post, c->var, c->aexp, vt);
    case Cmd::Kind::AssignAct: return substitute_act(post, c->mode);
    case Cmd::Kind::Seq: return wp(c->c1, wp(c->c2, post, vt), vt);
    case Cmd::Kind::If: {
      FormulaPtr g = to_formula(c->guard);
      return Formula::disj(Formula::conj(g, wp(c->c1, post, vt)),
                           Formula::conj(Formula::negate(g),
                                         wp(c->c2, post, vt)));
    }
  }
  throw std::logic_error("wp: bad kind");
}

// Strongest postcondition of a controller command.
inline FormulaPtr sp(const CmdPtr& c, const FormulaPtr& pre,
                     const VarTable& vt) {
  switch (c->kind) {
    case Cmd::Kind::Skip: return pre;
    case Cmd::Kind::AssignThink: {
      std::string v = vt.fresh_logical();
      AExpPtr vn = AExp::logical(v);
      FormulaPtr shifted = substitute(pre, c->var, vn, vt);
      AExpPtr rhs = substitute_aexp(c->aexp, c->var, vn);
      FormulaPtr eq = Formula::cmp(Rop::Eq, AExp::think(c->var), rhs);
      return Formula::exists(v, Formula::conj(shifted, eq));
    }
    case Cmd::Kind::AssignAct: {
      FormulaPtr any;
      for (auto& m : vt.modes) {
        FormulaPtr g = substitute_act(pre, m);
        any = any ? Formula::disj(any, g) : g;
      }
      if (!any) any = pre;
      return Formula::conj(
          any, Formula::mode_eq(ModeExpr::act(), ModeExpr::lit(c->mode)));
    }
    case Cmd::Kind::Seq: return sp(c->c2, sp(c->c1, pre, vt), vt);
    case Cmd::Kind::If: {
      FormulaPtr g = to_formula(c->guard);
      return Formula::disj(sp(c->c1, Formula::conj(pre, g), vt),
                           sp(c->c2, Formula::conj(pre, Formula::negate(g)),
                              vt));
    }
  }
  throw std::logic_error("sp: bad kind");
}

// Strongest postcondition of a sensing step that wrote `value` into sense
// variable `var`: the previous value is forgotten, the new one is pinned.
inline FormulaPtr sp_sense(const FormulaPtr& pre, const std::string& var,
                           bool value) {
  FormulaPtr forgotten = Formula::disj(substitute_sense(pre, var, true),
                                       substitute_sense(pre, var, false));
  FormulaPtr lit = value ? Formula::sense(var)
                         : Formula::negate(Formula::sense(var));
  return Formula::conj(forgotten, lit);
}

}  // namespace sdsyn
