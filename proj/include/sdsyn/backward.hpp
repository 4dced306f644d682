// Phase 2: backward search. The tree is rooted at the postcondition; a child
// fixes the sensor output and mode of one more (reversed-time) step and
// propagates the CP-condition backwards through act (time-reversed flow),
// think (weakest precondition), and sense (boolean substitution plus sensor
// preimage), then intersects with the forward approximant of the matching
// time index. Unsatisfiable labels are pruned; a depth-T node with a
// satisfiable label is a successful path. Only the DFS stack is ever
// materialized.
#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "sdsyn/forward.hpp"
#include "sdsyn/logic.hpp"
#include "sdsyn/system.hpp"

namespace sdsyn {

// Root-first, i.e. reversed time order: element 0 belongs to step T-1.
using SensePath = std::vector<std::pair<SenseReading, Mode>>;

struct SearchNode {
  SensePath path;
  CPCondition label;
  int depth = 0;  // labels time k = T - depth
};

enum class Strategy { Random, Volume, Robustness };

// One backward step with the sensor output and mode fixed.
inline CPCondition one_bs_pre(const SystemSpec& sys, const SenseReading& sout,
                              const Mode& m, const CPCondition& cp,
                              int ode_steps = kDefaultOdeSteps) {
  const VarTable& vt = sys.vars;
  // act, reversed
  FormulaPtr phi = Formula::conj(
      cp.c_cond, Formula::mode_eq(ModeExpr::act(), ModeExpr::lit(m)));
  IntervalSet P = flow_interval_set(sys.rhs(m), cp.p_cond, /*reverse=*/true,
                                    ode_steps);
  // think
  phi = wp(sys.controller, phi, vt);
  // sense
  for (auto& [var, val] : sout) phi = substitute_sense(phi, var, val);
  P = P.intersect(sys.sensor.preimage(sout));
  return {simplify(phi, vt), P};
}

// Child label: backward propagation conjoined with the forward approximant
// at the child's time index. The approximant's act-variable constraint
// describes the mode *entering* time k, while the backward condition talks
// about the mode chosen *at* time k, so the act variable is projected out
// of the approximant before conjoining (entry 0 is the precondition itself
// and is used exactly).
inline SearchNode expand_child(const SystemSpec& sys, const FASequence& fa,
                               const SearchNode& node, const SenseReading& sout,
                               const Mode& m, int T,
                               int ode_steps = kDefaultOdeSteps) {
  const VarTable& vt = sys.vars;
  int k = T - node.depth - 1;
  CPCondition back = one_bs_pre(sys, sout, m, node.label, ode_steps);
  const CPCondition& fwd = fa.entries[k];
  FormulaPtr fwd_c = k == 0 ? fwd.c_cond : project_act(fwd.c_cond, vt);
  SearchNode child;
  child.path = node.path;
  child.path.emplace_back(sout, m);
  child.depth = node.depth + 1;
  child.label.c_cond = simplify(Formula::conj(fwd_c, back.c_cond), vt);
  child.label.p_cond = fwd.p_cond.intersect(back.p_cond);
  return child;
}

namespace detail {

inline double component_mid(const Interval& iv) { return iv.pick(); }

// Order the satisfiable children according to the strategy. `k` is the
// child's time index (for the robustness reference).
inline void order_children(std::vector<SearchNode>& kids, Strategy strategy,
                           std::mt19937& rng, const FASequence& fa, int k) {
  switch (strategy) {
    case Strategy::Random:
      std::shuffle(kids.begin(), kids.end(), rng);
      return;
    case Strategy::Volume:
      std::stable_sort(kids.begin(), kids.end(),
                       [](const SearchNode& a, const SearchNode& b) {
                         return a.label.p_cond.volume() >
                                b.label.p_cond.volume();
                       });
      return;
    case Strategy::Robustness: {
      auto target = fa.entries[k].p_cond.largest_component();
      if (!target) return;
      double center = component_mid(*target);
      auto dist = [&](const SearchNode& n) {
        double best = kInf;
        for (auto& c : n.label.p_cond.parts())
          best = std::min(best, std::fabs(component_mid(c) - center));
        return best;
      };
      std::stable_sort(kids.begin(), kids.end(),
                       [&](const SearchNode& a, const SearchNode& b) {
                         return dist(a) < dist(b);
                       });
      return;
    }
  }
}

}  // namespace detail

// Depth-first search for a successful path. Deterministic for a fixed
// (strategy, seed).
inline std::optional<SensePath> search(const SynthesisProblem& problem,
                                       const FASequence& fa, Strategy strategy,
                                       unsigned seed, SearchStats& stats,
                                       int ode_steps = kDefaultOdeSteps) {
  const SystemSpec& sys = problem.system;
  const VarTable& vt = sys.vars;
  const int T = problem.steps;
  std::mt19937 rng(seed);

  SearchNode root;
  root.label = problem.post;
  if (root.label.unsatisfiable(vt)) return std::nullopt;
  if (T == 0) return SensePath{};

  struct Frame {
    std::vector<SearchNode> kids;
    size_t next = 0;
  };
  auto make_frame = [&](const SearchNode& node) {
    Frame f;
    int k = T - node.depth - 1;
    for (auto& sout : all_sense_outputs(vt))
      for (auto& m : vt.modes) {
        SearchNode child =
            expand_child(sys, fa, node, sout, m, T, ode_steps);
        ++stats.expanded;
        if (child.label.unsatisfiable(vt)) {
          ++stats.pruned;
          continue;
        }
        f.kids.push_back(std::move(child));
      }
    detail::order_children(f.kids, strategy, rng, fa, k);
    return f;
  };

  std::vector<Frame> stack;
  stack.push_back(make_frame(root));
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next >= top.kids.size()) {
      stack.pop_back();
      ++stats.backtracks;
      continue;
    }
    const SearchNode& node = top.kids[top.next++];
    if (node.depth == T) return node.path;  // satisfiable by construction
    stack.push_back(make_frame(node));
  }
  return std::nullopt;
}

}  // namespace sdsyn
