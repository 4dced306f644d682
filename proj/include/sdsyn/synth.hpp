// Phase 3: turn a successful backward-search path into a concrete answer.
// Pick an initial state from the leaf label, replay the plant under the
// path's mode sequence, choose one robust input per step so the sensor
// reproduces the path's outputs, and verify the whole run.
#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "sdsyn/backward.hpp"
#include "sdsyn/forward.hpp"
#include "sdsyn/system.hpp"

namespace sdsyn {

// Raised when the replayed plant state admits no input reproducing the
// path's sensor output — the symptom of integration drift.
struct DriftError : std::runtime_error {
  int step;
  double p_state;
  DriftError(int k, double x, const std::string& feasible)
      : std::runtime_error("no feasible input at step " + std::to_string(k) +
                           " (plant state " + format_real(x) +
                           ", feasible set " + feasible + ")"),
        step(k),
        p_state(x) {}
};

// Initial state from a satisfiable leaf label: a model of the controller
// condition and the midpoint of the largest plant component.
inline SystemState choose_initial(const CPCondition& leaf,
                                  const VarTable& vt) {
  auto model = find_model(leaf.c_cond, vt);
  auto comp = leaf.p_cond.largest_component();
  if (!model || !comp)
    throw std::runtime_error("choose_initial: unsatisfiable leaf label");
  SystemState st;
  for (auto& v : vt.think_vars) {
    auto it = model->reals.find(v);
    st.c_state.think[v] = it == model->reals.end() ? 0.0 : it->second;
  }
  for (auto& v : vt.sense_vars) {
    auto it = model->sense.find(v);
    st.c_state.sense[v] = it != model->sense.end() && it->second;
  }
  st.c_state.act = vt.modes.empty() ? Mode{} : vt.modes.front();
  for (auto& m : vt.modes)
    if (model->modes.count(m)) {
      st.c_state.act = m;
      break;
    }
  st.p_state = comp->pick();
  return st;
}

// Plant states visited when the mode sequence is fixed; length |modes| + 1.
inline std::vector<double> replay_modes(const SystemSpec& sys, double x0,
                                        const std::vector<Mode>& modes,
                                        int ode_steps = kDefaultOdeSteps) {
  std::vector<double> xs{x0};
  for (auto& m : modes)
    xs.push_back(flow(sys.rhs(m), xs.back(), 1.0, ode_steps));
  return xs;
}

// One input per step: the midpoint of the largest feasible component.
// `path` is in time order here. `slack` relaxes the sensor thresholds when
// retrying after drift.
inline std::vector<double> synthesize_inputs(
    const SystemSpec& sys, const std::vector<std::pair<SenseReading, Mode>>& path,
    const std::vector<double>& xs, double slack = 0.0) {
  if (xs.size() != path.size() + 1)
    throw std::runtime_error("synthesize_inputs: length mismatch");
  std::vector<double> inputs;
  for (size_t k = 0; k < path.size(); ++k) {
    IntervalSet feas =
        sys.sensor.feasible_inputs(xs[k], path[k].first, slack);
    auto comp = feas.largest_component();
    if (!comp)
      throw DriftError(static_cast<int>(k), xs[k], to_string(feas));
    inputs.push_back(comp->pick());
  }
  return inputs;
}

struct SolveOptions {
  Strategy strategy = Strategy::Robustness;
  unsigned seed = 0;
  bool truncate_fa = true;
  int ode_steps = kDefaultOdeSteps;
  double eps_member = kMemberTol;
  bool retry_widen = false;
};

inline bool verify_answer(const SynthesisProblem& problem, const Answer& ans,
                          double eps_member = kMemberTol,
                          int ode_steps = kDefaultOdeSteps) {
  auto trace = run(problem.system, ans.initial, ans.inputs, ode_steps);
  return satisfies(trace.front(), problem.pre, problem.system.vars,
                   eps_member) &&
         satisfies(trace.back(), problem.post, problem.system.vars,
                   eps_member);
}

inline std::optional<Answer> solve(const SynthesisProblem& problem,
                                   const SolveOptions& opt = {},
                                   FASequence* fa_out = nullptr) {
  using clock = std::chrono::steady_clock;
  auto ms = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };
  SearchStats stats;

  auto t0 = clock::now();
  FASequence fa = fa_sequence(problem, opt.truncate_fa, opt.ode_steps);
  if (fa_out) *fa_out = fa;
  auto t1 = clock::now();
  stats.fa_ms = ms(t0, t1);

  auto path = search(problem, fa, opt.strategy, opt.seed, stats,
                     opt.ode_steps);
  auto t2 = clock::now();
  stats.search_ms = ms(t1, t2);
  if (!path) return std::nullopt;

  // Recompute the leaf label by folding the path from the root.
  SearchNode node;
  node.label = problem.post;
  for (auto& [sout, m] : *path)
    node = expand_child(problem.system, fa, node, sout, m, problem.steps,
                        opt.ode_steps);

  // Time order: the search path is root-first, i.e. reversed.
  std::vector<std::pair<SenseReading, Mode>> tpath(path->rbegin(),
                                                   path->rend());
  std::vector<Mode> modes;
  for (auto& [_, m] : tpath) modes.push_back(m);

  Answer ans;
  ans.initial = choose_initial(node.label, problem.system.vars);
  std::vector<double> xs =
      replay_modes(problem.system, ans.initial.p_state, modes, opt.ode_steps);
  double slack = 0.0;
  for (int attempt = 0;; ++attempt) {
    try {
      ans.inputs = synthesize_inputs(problem.system, tpath, xs, slack);
      break;
    } catch (const DriftError&) {
      if (!opt.retry_widen || attempt >= 4) throw;
      slack = slack == 0.0 ? opt.eps_member : slack * 2.0;
    }
  }
  ans.path = tpath;
  ans.trace = run(problem.system, ans.initial, ans.inputs, opt.ode_steps);
  auto t3 = clock::now();
  stats.synth_ms = ms(t2, t3);
  ans.stats = stats;
  return ans;
}

}  // namespace sdsyn
