// Sensors: each boolean sense variable is a conjunction of affine
// predicates over the plant state x and the external input i, i.e.
// a*x + b*i + c {=,<,<=} 0. The module answers three questions: what does
// the sensor read for concrete (x, i); which inputs produce a desired
// reading at a given state; and which states admit *some* input producing a
// desired reading (the preimage used by the backward search).
#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sdsyn/eval.hpp"
#include "sdsyn/interval.hpp"
#include "sdsyn/logic.hpp"
#include "sdsyn/parser.hpp"

namespace sdsyn {

// a*x + b*i + c rel 0, rel in {Eq, Lt, Le}.
struct AffineAtom {
  double a = 0.0, b = 0.0, c = 0.0;
  LinRel rel = LinRel::Le;
};

using SenseReading = std::map<std::string, bool>;

class SensorSpec {
 public:
  // The distinguished input variable name in sensor predicates.
  static constexpr const char* kInputName = "i";

  std::map<std::string, std::vector<AffineAtom>> preds;  // per sense var
  IntervalSet input_range = IntervalSet::all();

  // Parse "v + i >= 1" style predicates for one sense variable.
  static std::vector<AffineAtom> parse_pred(const std::string& text,
                                            const std::string& plant_var) {
    VarTable vt;
    vt.think_vars = {plant_var, kInputName};
    FormulaPtr f = parse_formula(text, vt);
    std::vector<AffineAtom> atoms;
    collect(f, plant_var, atoms);
    return atoms;
  }

  SenseReading read(double x, double i) const {
    SenseReading r;
    for (auto& [var, atoms] : preds) {
      bool v = true;
      for (auto& at : atoms)
        if (!atom_holds(at, x, i)) v = false;
      r[var] = v;
    }
    return r;
  }

  // Inputs (within range) that make the sensor produce `want` at state x.
  // `slack` relaxes every predicate threshold (used by drift-retry only).
  IntervalSet feasible_inputs(double x, const SenseReading& want,
                              double slack = 0.0) const {
    IntervalSet res = input_range;
    for (auto& [var, atoms] : preds) {
      auto it = want.find(var);
      if (it == want.end()) continue;
      IntervalSet ok;
      if (it->second) {
        Interval iv = Interval::all();
        bool dead = false;
        for (auto& at : atoms) {
          if (!intersect_i(iv, at, x, slack)) {
            dead = true;
            break;
          }
        }
        if (!dead) ok = IntervalSet(iv);
      } else {
        // reading ff: some atom fails
        for (auto& at : atoms)
          for (auto& nat : negate_atom(at)) {
            Interval iv = Interval::all();
            if (intersect_i(iv, nat, x, slack)) ok = ok.unite(IntervalSet(iv));
          }
      }
      res = res.intersect(ok);
    }
    return res;
  }

  // States x admitting some input i in range with reading `want`.
  IntervalSet preimage(const SenseReading& want) const {
    // Enumerate branches: tt keeps the whole conjunction, ff picks one
    // (possibly split) negated atom per variable.
    std::vector<std::vector<AffineAtom>> branches;
    branches.emplace_back();
    for (auto& [var, atoms] : preds) {
      auto it = want.find(var);
      if (it == want.end()) continue;
      if (it->second) {
        for (auto& br : branches)
          br.insert(br.end(), atoms.begin(), atoms.end());
      } else {
        std::vector<std::vector<AffineAtom>> next;
        for (auto& br : branches)
          for (auto& at : atoms)
            for (auto& nat : negate_atom(at)) {
              auto b2 = br;
              b2.push_back(nat);
              next.push_back(std::move(b2));
            }
        branches = std::move(next);
      }
    }
    IntervalSet out;
    for (auto& br : branches) out = out.unite(branch_states(br));
    return out;
  }

 private:
  // linear function of x: value a*x + c
  struct LinFn {
    double a, c;
    bool strict;
  };

  static bool atom_holds(const AffineAtom& at, double x, double i) {
    double v = at.a * x + at.b * i + at.c;
    switch (at.rel) {
      case LinRel::Eq: return std::fabs(v) <= kEqTol;
      case LinRel::Lt: return v < 0.0;
      case LinRel::Le: return v <= 0.0;
    }
    return false;
  }

  static std::vector<AffineAtom> negate_atom(const AffineAtom& at) {
    switch (at.rel) {
      case LinRel::Eq:
        return {{at.a, at.b, at.c, LinRel::Lt},
                {-at.a, -at.b, -at.c, LinRel::Lt}};
      case LinRel::Lt: return {{-at.a, -at.b, -at.c, LinRel::Le}};
      case LinRel::Le: return {{-at.a, -at.b, -at.c, LinRel::Lt}};
    }
    return {};
  }

  // Constrain the i-interval by the atom at fixed x, with the threshold
  // relaxed by `slack`. Returns false when the atom is unsatisfiable there.
  static bool intersect_i(Interval& iv, const AffineAtom& at, double x,
                          double slack) {
    double rest = at.a * x + at.c;  // b*i + rest rel 0
    if (at.b == 0.0) {
      switch (at.rel) {
        case LinRel::Eq: return std::fabs(rest) <= kEqTol + slack;
        case LinRel::Lt: return rest < slack;
        case LinRel::Le: return rest <= slack;
      }
      return false;
    }
    bool strict = at.rel == LinRel::Lt;
    Interval half;
    if (at.rel == LinRel::Eq) {
      double lo = (-slack - rest) / at.b, hi = (slack - rest) / at.b;
      if (lo > hi) std::swap(lo, hi);
      half = Interval::make(lo, false, hi, false);
    } else {
      double bnd = (slack - rest) / at.b;
      if (at.b > 0)
        half = Interval::make(-kInf, true, bnd, strict);
      else
        half = Interval::make(bnd, strict, kInf, true);
    }
    auto r = iv.intersect(half);
    if (!r) return false;
    iv = *r;
    return true;
  }

  // States where the conjunction of `atoms` has a witness i in range.
  IntervalSet branch_states(const std::vector<AffineAtom>& atoms) const {
    // Split atoms into direct x-constraints and i-bounds linear in x.
    std::vector<LinFn> lowers, uppers;  // bounds on i
    Interval xdirect = Interval::all();
    std::vector<LinFn> eqs;             // i pinned to a line in x
    for (auto& at : atoms) {
      if (at.b == 0.0) {
        // a*x + c rel 0
        AffineAtom ax = at;
        Interval half;
        if (ax.a == 0.0) {
          bool ok;
          switch (ax.rel) {
            case LinRel::Eq: ok = std::fabs(ax.c) <= kLinTol; break;
            case LinRel::Lt: ok = ax.c < 0.0; break;
            case LinRel::Le: ok = ax.c <= 0.0; break;
            default: ok = false;
          }
          if (!ok) return IntervalSet::empty();
          continue;
        }
        double bnd = -ax.c / ax.a;
        bool strict = ax.rel == LinRel::Lt;
        if (ax.rel == LinRel::Eq)
          half = Interval::point(bnd);
        else if (ax.a > 0)
          half = Interval::make(-kInf, true, bnd, strict);
        else
          half = Interval::make(bnd, strict, kInf, true);
        auto r = xdirect.intersect(half);
        if (!r) return IntervalSet::empty();
        xdirect = *r;
        continue;
      }
      LinFn f{-at.a / at.b, -at.c / at.b, at.rel == LinRel::Lt};
      if (at.rel == LinRel::Eq) {
        eqs.push_back({f.a, f.c, false});
        continue;
      }
      if (at.b > 0)
        uppers.push_back(f);  // i <(=) f(x)
      else
        lowers.push_back(f);  // i >(=) f(x)
    }
    // An equality pins i: treat it as both a lower and an upper bound.
    for (auto& e : eqs) {
      lowers.push_back(e);
      uppers.push_back(e);
    }
    IntervalSet out;
    for (auto& part : input_range.parts()) {
      auto lo = lowers;
      auto up = uppers;
      if (!std::isinf(part.lo)) lo.push_back({0.0, part.lo, part.lo_open});
      if (!std::isinf(part.hi)) up.push_back({0.0, part.hi, part.hi_open});
      Interval x = xdirect;
      bool dead = false;
      for (auto& l : lo) {
        for (auto& u : up) {
          // need l(x) <(=) u(x):  (l.a-u.a)*x + (l.c-u.c) rel 0
          double a = l.a - u.a, c = l.c - u.c;
          bool strict = l.strict || u.strict;
          Interval half;
          if (a == 0.0) {
            if (strict ? c >= 0.0 : c > 0.0) {
              dead = true;
              break;
            }
            continue;
          }
          double bnd = -c / a;
          half = a > 0 ? Interval::make(-kInf, true, bnd, strict)
                       : Interval::make(bnd, strict, kInf, true);
          auto r = x.intersect(half);
          if (!r) {
            dead = true;
            break;
          }
          x = *r;
        }
        if (dead) break;
      }
      if (!dead && !x.empty()) out = out.unite(IntervalSet(x));
    }
    return out;
  }

  static void collect(const FormulaPtr& f, const std::string& plant_var,
                      std::vector<AffineAtom>& out) {
    if (f->kind == Formula::Kind::And) {
      collect(f->lhs, plant_var, out);
      collect(f->rhs, plant_var, out);
      return;
    }
    if (f->kind == Formula::Kind::True) return;
    if (f->kind != Formula::Kind::Cmp)
      throw std::runtime_error(
          "sensor predicate must be a conjunction of affine comparisons");
    LinearForm lf = linearize(f->alhs).minus(linearize(f->arhs));
    LinRel rel;
    switch (f->rop) {
      case Rop::Eq: rel = LinRel::Eq; break;
      case Rop::Lt: rel = LinRel::Lt; break;
      case Rop::Le: rel = LinRel::Le; break;
      case Rop::Gt:
        lf = lf.scaled(-1.0);
        rel = LinRel::Lt;
        break;
      case Rop::Ge:
        lf = lf.scaled(-1.0);
        rel = LinRel::Le;
        break;
      default: rel = LinRel::Le; break;
    }
    AffineAtom at;
    at.a = lf.coeff_of(plant_var);
    at.b = lf.coeff_of(kInputName);
    at.c = lf.cst;
    at.rel = rel;
    out.push_back(at);
  }
};

}  // namespace sdsyn
