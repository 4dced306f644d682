// Phase 1: the forward over-approximation sequence. Entry k over-approximates
// the set of system states reachable in exactly k steps from the
// precondition. Each step composes symbolic sense, think, and act stages per
// sensor-output/mode branch and unifies the satisfiable branches. An
// optional truncation replaces the controller condition by `true` once it
// has become compatible with every mode and thus stops discriminating.
#pragma once

#include <vector>

#include "sdsyn/logic.hpp"
#include "sdsyn/system.hpp"

namespace sdsyn {

struct FASequence {
  std::vector<CPCondition> entries;  // index 0..T; entry 0 is the pre
  std::vector<bool> truncated;       // per entry: c_cond replaced by true
};

// All sensor outputs, tt before ff per variable, first declared variable
// most significant.
inline std::vector<SenseReading> all_sense_outputs(const VarTable& vt) {
  size_t n = vt.sense_vars.size();
  std::vector<SenseReading> out;
  for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
    SenseReading r;
    for (size_t j = 0; j < n; ++j)
      r[vt.sense_vars[j]] = ((mask >> (n - 1 - j)) & 1) == 0;
    out.push_back(std::move(r));
  }
  return out;
}

// One branch of the forward step: fix the sensor output and the mode, and
// push the CP-condition through sense, think, and act.
inline CPCondition one_fa_pre(const SystemSpec& sys, const SenseReading& sout,
                              const Mode& m, const CPCondition& cp,
                              int ode_steps = kDefaultOdeSteps) {
  const VarTable& vt = sys.vars;
  // sense
  FormulaPtr phi = cp.c_cond;
  for (auto& [var, val] : sout) phi = sp_sense(phi, var, val);
  IntervalSet P = cp.p_cond.intersect(sys.sensor.preimage(sout));
  // think
  phi = simplify(sp(sys.controller, phi, vt), vt);
  // act
  phi = simplify(
      Formula::conj(phi, Formula::mode_eq(ModeExpr::act(), ModeExpr::lit(m))),
      vt);
  P = flow_interval_set(sys.rhs(m), P, /*reverse=*/false, ode_steps);
  return {phi, P};
}

// One forward step: disjunction/union over the satisfiable branches. Sense
// variables are projected out of the unified controller condition — their
// values are transient (rewritten by the next sense stage), and keeping
// them correlated with the think state only bloats the formula.
inline CPCondition one_fa(const SystemSpec& sys, const CPCondition& cp,
                          int ode_steps = kDefaultOdeSteps) {
  const VarTable& vt = sys.vars;
  FormulaPtr phi = Formula::truth(false);
  IntervalSet P;
  for (auto& sout : all_sense_outputs(vt))
    for (auto& m : vt.modes) {
      CPCondition b = one_fa_pre(sys, sout, m, cp, ode_steps);
      if (b.unsatisfiable(vt)) continue;
      phi = Formula::disj(phi, b.c_cond);
      P = P.unite(b.p_cond);
    }
  return {simplify(project_sense(phi, vt), vt), P};
}

namespace detail {

// Truncation trigger: the controller condition no longer rules out any
// mode, i.e. it is satisfiable together with xa = m for every m.
inline bool mode_compatible(const FormulaPtr& phi, const VarTable& vt) {
  for (auto& m : vt.modes) {
    FormulaPtr q = Formula::conj(
        phi, Formula::mode_eq(ModeExpr::act(), ModeExpr::lit(m)));
    if (!is_satisfiable(q, vt)) return false;
  }
  return true;
}

}  // namespace detail

inline FASequence fa_sequence(const SynthesisProblem& problem,
                              bool truncate = true,
                              int ode_steps = kDefaultOdeSteps) {
  const SystemSpec& sys = problem.system;
  const VarTable& vt = sys.vars;
  FASequence fa;
  fa.entries.push_back(problem.pre);
  fa.truncated.push_back(false);  // entry 0 is never truncated
  bool truncating = false;
  for (int k = 1; k <= problem.steps; ++k) {
    CPCondition next = one_fa(sys, fa.entries.back(), ode_steps);
    if (truncate && !truncating && detail::mode_compatible(next.c_cond, vt))
      truncating = true;
    if (truncating) next.c_cond = Formula::truth(true);
    fa.entries.push_back(next);
    fa.truncated.push_back(truncating);
  }
  return fa;
}

}  // namespace sdsyn
