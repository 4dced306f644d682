// Shared test utilities: fixture loading, random AST generation, a
// grid-based satisfiability oracle, and interval comparison helpers.
#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "sdsyn/interval.hpp"
#include "sdsyn/logic.hpp"
#include "sdsyn/printer.hpp"
#include "sdsyn/problem_io.hpp"
#include "sdsyn/system.hpp"

namespace testutil {

inline std::string fixture(const std::string& name) {
  return std::string(SDSYN_FIXTURES) + "/" + name;
}

inline sdsyn::SynthesisProblem fig2() {
  return sdsyn::load_problem(fixture("fig2.sds"));
}

inline sdsyn::SynthesisProblem fig1() {
  return sdsyn::load_problem(fixture("fig1.sds"));
}

// Approximate interval-set equality: same component count, endpoints within
// eps, matching open/closed flags.
inline bool sets_close(const sdsyn::IntervalSet& a, const sdsyn::IntervalSet& b,
                       double eps = 1e-6) {
  if (a.parts().size() != b.parts().size()) return false;
  for (size_t i = 0; i < a.parts().size(); ++i) {
    const auto &x = a.parts()[i], &y = b.parts()[i];
    bool lo_ok = (std::isinf(x.lo) && std::isinf(y.lo) && x.lo == y.lo) ||
                 std::fabs(x.lo - y.lo) <= eps;
    bool hi_ok = (std::isinf(x.hi) && std::isinf(y.hi) && x.hi == y.hi) ||
                 std::fabs(x.hi - y.hi) <= eps;
    if (!lo_ok || !hi_ok) return false;
    if (x.lo_open != y.lo_open || x.hi_open != y.hi_open) return false;
  }
  return true;
}

// --- random AST generation ---------------------------------------------

struct AstGen {
  std::mt19937 rng;
  const sdsyn::VarTable& vt;

  AstGen(unsigned seed, const sdsyn::VarTable& vars) : rng(seed), vt(vars) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  double literal() {
    static const double lits[] = {0, 1, 2, 3, 0.5, 0.25, 1.5, 100};
    return lits[pick(8)];
  }

  sdsyn::AExpPtr aexp(int depth) {
    using sdsyn::AExp;
    if (depth <= 0 || pick(3) == 0) {
      if (!vt.think_vars.empty() && pick(2) == 0)
        return AExp::think(vt.think_vars[pick((int)vt.think_vars.size())]);
      return AExp::literal(literal());
    }
    sdsyn::AOp ops[] = {sdsyn::AOp::Add, sdsyn::AOp::Sub, sdsyn::AOp::Mul};
    return AExp::bin(ops[pick(3)], aexp(depth - 1), aexp(depth - 1));
  }

  // Linear arithmetic expression: coef * var + ... + const (for formulas
  // that must stay inside the decidable fragment).
  sdsyn::AExpPtr linear_aexp() {
    using sdsyn::AExp;
    sdsyn::AExpPtr e = AExp::literal(literal());
    for (auto& v : vt.think_vars)
      if (pick(2) == 0)
        e = AExp::bin(sdsyn::AOp::Add, e,
                      AExp::bin(sdsyn::AOp::Mul, AExp::literal(literal()),
                                AExp::think(v)));
    return e;
  }

  sdsyn::Rop rop() {
    sdsyn::Rop r[] = {sdsyn::Rop::Eq, sdsyn::Rop::Lt, sdsyn::Rop::Le,
                      sdsyn::Rop::Gt, sdsyn::Rop::Ge};
    return r[pick(5)];
  }

  sdsyn::BExpPtr bexp(int depth) {
    using sdsyn::BExp;
    if (depth <= 0 || pick(3) == 0) {
      switch (pick(3)) {
        case 0: return BExp::truth(pick(2) == 0);
        case 1:
          if (!vt.sense_vars.empty())
            return BExp::sense(vt.sense_vars[pick((int)vt.sense_vars.size())]);
          [[fallthrough]];
        default: return BExp::cmp(rop(), aexp(depth - 1), aexp(depth - 1));
      }
    }
    switch (pick(3)) {
      case 0: return BExp::negate(bexp(depth - 1));
      case 1: return BExp::conj(bexp(depth - 1), bexp(depth - 1));
      default: return BExp::disj(bexp(depth - 1), bexp(depth - 1));
    }
  }

  sdsyn::CmdPtr cmd(int depth) {
    using sdsyn::Cmd;
    if (depth <= 0 || pick(4) == 0) {
      switch (pick(3)) {
        case 0: return Cmd::skip();
        case 1:
          if (!vt.modes.empty())
            return Cmd::assign_act(vt.modes[pick((int)vt.modes.size())]);
          [[fallthrough]];
        default:
          return Cmd::assign_think(
              vt.think_vars[pick((int)vt.think_vars.size())], aexp(2));
      }
    }
    if (pick(2) == 0) {
      // `;` associates to the right in the surface syntax, so keep the
      // left side sequence-free or the round trip renests it
      sdsyn::CmdPtr lhs = cmd(depth - 1);
      while (lhs->kind == Cmd::Kind::Seq) lhs = cmd(depth - 1);
      return Cmd::seq(lhs, cmd(depth - 1));
    }
    return Cmd::branch(bexp(2), cmd(depth - 1), cmd(depth - 1));
  }

  // Quantifier-free formula in the linear fragment.
  sdsyn::FormulaPtr formula(int depth) {
    using sdsyn::Formula;
    if (depth <= 0 || pick(3) == 0) {
      switch (pick(4)) {
        case 0: return Formula::truth(pick(2) == 0);
        case 1:
          if (!vt.sense_vars.empty())
            return Formula::sense(
                vt.sense_vars[pick((int)vt.sense_vars.size())]);
          [[fallthrough]];
        case 2:
          if (!vt.modes.empty())
            return Formula::mode_eq(
                sdsyn::ModeExpr::act(),
                sdsyn::ModeExpr::lit(vt.modes[pick((int)vt.modes.size())]));
          [[fallthrough]];
        default: return Formula::cmp(rop(), linear_aexp(), linear_aexp());
      }
    }
    switch (pick(3)) {
      case 0: return Formula::negate(formula(depth - 1));
      case 1: return Formula::conj(formula(depth - 1), formula(depth - 1));
      default: return Formula::disj(formula(depth - 1), formula(depth - 1));
    }
  }

  sdsyn::Valuation valuation() {
    sdsyn::Valuation s;
    static const double vals[] = {-2, -1, -0.5, 0, 0.5, 1, 1.5, 2, 3};
    for (auto& v : vt.think_vars) s.think[v] = vals[pick(9)];
    for (auto& v : vt.sense_vars) s.sense[v] = pick(2) == 0;
    if (!vt.modes.empty()) s.act = vt.modes[pick((int)vt.modes.size())];
    return s;
  }
};

// Standard variable table used by the random-AST property tests.
inline sdsyn::VarTable test_vars() {
  sdsyn::VarTable vt;
  vt.think_vars = {"cnt", "y"};
  vt.sense_vars = {"xs", "ys"};
  vt.modes = {"Acl", "Brk"};
  return vt;
}

// --- grid satisfiability oracle ------------------------------------------
//
// Exact for formulas over a single think variable whose atom constants are
// multiples of 0.5 within [-3, 3]: any satisfiable boolean/linear
// combination then has a witness on the 0.25-spaced grid.

struct GridOracle {
  const sdsyn::VarTable& vt;

  bool satisfiable(const sdsyn::FormulaPtr& f) const {
    sdsyn::Valuation s;
    for (double x = -4.0; x <= 4.0 + 1e-12; x += 0.25) {
      s.think[vt.think_vars.front()] = x;
      for (int sb = 0; sb < (1 << (int)vt.sense_vars.size()); ++sb) {
        for (size_t j = 0; j < vt.sense_vars.size(); ++j)
          s.sense[vt.sense_vars[j]] = (sb >> j) & 1;
        for (auto& m : vt.modes) {
          s.act = m;
          if (sdsyn::holds_qf(f, s, {})) return true;
        }
      }
    }
    return false;
  }
};

// Random formula whose atoms compare the single think variable against
// half-integer constants (keeps the grid oracle exact).
inline sdsyn::FormulaPtr grid_formula(AstGen& g, int depth) {
  using sdsyn::Formula;
  if (depth <= 0 || g.pick(3) == 0) {
    switch (g.pick(4)) {
      case 0: return Formula::truth(g.pick(2) == 0);
      case 1:
        return Formula::sense(
            g.vt.sense_vars[g.pick((int)g.vt.sense_vars.size())]);
      case 2:
        return Formula::mode_eq(
            sdsyn::ModeExpr::act(),
            sdsyn::ModeExpr::lit(g.vt.modes[g.pick((int)g.vt.modes.size())]));
      default: {
        double c = -3.0 + 0.5 * g.pick(13);
        return Formula::cmp(g.rop(),
                            sdsyn::AExp::think(g.vt.think_vars.front()),
                            sdsyn::AExp::literal(c));
      }
    }
  }
  switch (g.pick(3)) {
    case 0: return Formula::negate(grid_formula(g, depth - 1));
    case 1:
      return Formula::conj(grid_formula(g, depth - 1),
                           grid_formula(g, depth - 1));
    default:
      return Formula::disj(grid_formula(g, depth - 1),
                           grid_formula(g, depth - 1));
  }
}

// --- randomized small synthesis problems and the exhaustive oracle -------

// Two-mode count-up/reset family with affine dynamics: structurally like the
// running example but with randomized thresholds, rates, sensor offsets, and
// pre/post windows.
inline sdsyn::SynthesisProblem random_problem(unsigned seed) {
  using namespace sdsyn;
  std::mt19937 rng(seed);
  auto pickd = [&](std::initializer_list<double> xs) {
    std::vector<double> v(xs);
    return v[std::uniform_int_distribution<size_t>(0, v.size() - 1)(rng)];
  };
  auto picki = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  SynthesisProblem prob;
  SystemSpec& sys = prob.system;
  VarTable& vt = sys.vars;
  vt.think_vars = {"c"};
  vt.sense_vars = {"s"};
  vt.modes = {"Up", "Dn"};

  double up_a = pickd({-0.3, 0.0, 0.2}), up_b = pickd({0.3, 0.5, 0.8});
  double dn_b = pickd({-0.6, -0.4, -0.2});
  sys.plant_var = "x";
  sys.plant.emplace("Up", PlantRhs::parse(format_real(up_a) + " * x + " +
                                              format_real(up_b),
                                          "x"));
  sys.plant.emplace("Dn", PlantRhs::parse(format_real(dn_b), "x"));

  int threshold = picki(1, 2);
  sys.controller = parse_controller(
      "if s then c := c + 1 else c := 0; "
      "if c < " + std::to_string(threshold) + " then xa := Up else xa := Dn",
      vt);

  double sensor_cut = pickd({0.5, 0.8, 1.0});
  sys.sensor.preds["s"] =
      SensorSpec::parse_pred("x + i >= " + format_real(sensor_cut), "x");
  sys.sensor.input_range = IntervalSet(Interval::closed(-0.3, 0.3));

  prob.pre = {parse_formula("c = 0", vt),
              IntervalSet(Interval::closed(0.0, pickd({0.5, 1.0})))};
  double post_lo = pickd({0.6, 1.0, 1.4, 2.2});
  prob.post = {Formula::truth(true),
               IntervalSet(Interval::closed(post_lo, post_lo + 0.4))};
  prob.steps = picki(1, 3);
  return prob;
}

// Exhaustive path oracle: try every (sensor output, mode) sequence of
// length T, fold the backward expansion along it, and report whether any
// leaf is satisfiable. Needs backward.hpp; declared here, defined in the
// tests that include it after that header.
template <typename ExpandFn>
inline bool exhaustive_path_exists(const sdsyn::SynthesisProblem& prob,
                                   ExpandFn expand_leaf) {
  using namespace sdsyn;
  const VarTable& vt = prob.system.vars;
  int T = prob.steps;
  std::vector<SenseReading> souts;
  for (bool b : {true, false}) souts.push_back({{vt.sense_vars.front(), b}});
  size_t branch = souts.size() * vt.modes.size();
  size_t total = 1;
  for (int k = 0; k < T; ++k) total *= branch;
  for (size_t idx = 0; idx < total; ++idx) {
    std::vector<std::pair<SenseReading, Mode>> path;  // root-first
    size_t rest = idx;
    for (int k = 0; k < T; ++k) {
      size_t choice = rest % branch;
      rest /= branch;
      path.emplace_back(souts[choice / vt.modes.size()],
                        vt.modes[choice % vt.modes.size()]);
    }
    if (expand_leaf(path)) return true;
  }
  return false;
}

}  // namespace testutil
