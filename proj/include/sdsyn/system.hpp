// The sampled data system: controller + per-mode plant dynamics + sensor,
// its exact sense-think-act step semantics, CP-conditions (a controller
// formula paired with a plant interval set), and the synthesis problem and
// answer records.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "sdsyn/ast.hpp"
#include "sdsyn/eval.hpp"
#include "sdsyn/interval.hpp"
#include "sdsyn/logic.hpp"
#include "sdsyn/plant.hpp"
#include "sdsyn/sensor.hpp"

namespace sdsyn {

// Interval-membership inflation used when replaying answers; absorbs the
// forward/backward integration drift. Never applied in symbolic set algebra.
inline constexpr double kMemberTol = 1e-6;

struct SystemSpec {
  VarTable vars;
  CmdPtr controller;
  std::map<Mode, PlantRhs> plant;
  SensorSpec sensor;
  std::string plant_var;  // display name of the plant state (e.g. "v")

  const PlantRhs& rhs(const Mode& m) const {
    auto it = plant.find(m);
    if (it == plant.end())
      throw std::runtime_error("no dynamics for mode '" + m + "'");
    return it->second;
  }
};

struct SystemState {
  Valuation c_state;
  double p_state = 0.0;
};

struct CPCondition {
  FormulaPtr c_cond;
  IntervalSet p_cond;

  bool unsatisfiable(const VarTable& vt) const {
    return p_cond.is_empty() || !is_satisfiable(c_cond, vt);
  }
};

struct SynthesisProblem {
  SystemSpec system;
  CPCondition pre, post;
  int steps = 0;  // T
};

struct SearchStats {
  long backtracks = 0;
  long expanded = 0;
  long pruned = 0;
  double fa_ms = 0.0;
  double search_ms = 0.0;
  double synth_ms = 0.0;
};

struct Answer {
  SystemState initial;
  std::vector<double> inputs;                          // length T
  std::vector<std::pair<SenseReading, Mode>> path;     // time order, length T
  std::vector<SystemState> trace;                      // length T + 1
  SearchStats stats;
};

// One sense-think-act step.
inline SystemState step(const SystemSpec& sys, const SystemState& st, double i,
                        int ode_steps = kDefaultOdeSteps) {
  if (!sys.sensor.input_range.contains(i, kEqTol))
    throw std::runtime_error("input " + format_real(i) +
                             " outside the input domain");
  SystemState out = st;
  // sense
  for (auto& [var, val] : sys.sensor.read(st.p_state, i))
    out.c_state.sense[var] = val;
  // think
  out.c_state = exec_cmd(sys.controller, out.c_state);
  // act
  out.p_state = flow(sys.rhs(out.c_state.act), st.p_state, 1.0, ode_steps);
  return out;
}

inline std::vector<SystemState> run(const SystemSpec& sys,
                                    const SystemState& st0,
                                    const std::vector<double>& inputs,
                                    int ode_steps = kDefaultOdeSteps) {
  std::vector<SystemState> out{st0};
  for (double i : inputs) out.push_back(step(sys, out.back(), i, ode_steps));
  return out;
}

inline bool satisfies(const SystemState& st, const CPCondition& cp,
                      const VarTable& vt, double eps_member = kMemberTol) {
  return holds(cp.c_cond, st.c_state, vt) &&
         cp.p_cond.contains(st.p_state, eps_member);
}

}  // namespace sdsyn
