// Symbolic kernel: wp/sp, quantifier elimination, satisfiability,
// simplification, model extraction.
#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "sdsyn/eval.hpp"
#include "sdsyn/logic.hpp"
#include "sdsyn/parser.hpp"
#include "sdsyn/printer.hpp"

using namespace sdsyn;

namespace {

VarTable fig2_vars() {
  VarTable vt;
  vt.think_vars = {"cnt"};
  vt.sense_vars = {"xs"};
  vt.modes = {"Acl", "Brk"};
  return vt;
}

CmdPtr fig2_ctrl(const VarTable& vt) {
  return parse_controller(
      "if xs then cnt := cnt + 1 else cnt := 0; "
      "if cnt < 2 then xa := Acl else xa := Brk",
      vt);
}

}  // namespace

TEST_CASE("weakest precondition") {
  VarTable vt = fig2_vars();
  CmdPtr ctrl = fig2_ctrl(vt);

  SECTION("skip") {
    FormulaPtr f = parse_formula("cnt = 0", vt);
    REQUIRE(equal(wp(Cmd::skip(), f, vt), f));
  }

  SECTION("count-and-brake controller against the acceleration mode") {
    FormulaPtr post = parse_formula("xa = Acl", vt);
    FormulaPtr expect = parse_formula("(xs && cnt < 1) || !xs", vt);
    REQUIRE(equivalent(wp(ctrl, post, vt), expect, vt));
  }

  SECTION("conditional produces the guarded disjunction") {
    CmdPtr c = parse_controller(
        "if xs then cnt := cnt + 1 else cnt := 0", vt);
    FormulaPtr got = wp(c, parse_formula("cnt >= 1", vt), vt);
    FormulaPtr expect =
        parse_formula("(xs && cnt + 1 >= 1) || (!xs && 0 >= 1)", vt);
    REQUIRE(equivalent(got, expect, vt));
  }
}

TEST_CASE("wp is correct against execution (random programs)") {
  VarTable vt = testutil::test_vars();
  int checked = 0;
  for (unsigned seed = 0; seed < 150; ++seed) {
    testutil::AstGen gen(seed, vt);
    CmdPtr c = gen.cmd(3);
    FormulaPtr post = gen.formula(3);
    FormulaPtr pre = wp(c, post, vt);
    for (unsigned vs = 0; vs < 8; ++vs) {
      Valuation s = gen.valuation();
      REQUIRE(holds_qf(pre, s) == holds_qf(post, exec_cmd(c, s)));
      ++checked;
    }
  }
  REQUIRE(checked >= 1000);
}

TEST_CASE("strongest postcondition") {
  VarTable vt = fig2_vars();
  CmdPtr ctrl = fig2_ctrl(vt);

  SECTION("skip") {
    FormulaPtr f = parse_formula("cnt = 0", vt);
    REQUIRE(equal(sp(Cmd::skip(), f, vt), f));
  }

  SECTION("count-and-brake forward image of the reset state") {
    FormulaPtr pre = parse_formula("cnt = 0 && xs", vt);
    FormulaPtr expect = parse_formula("cnt = 1 && xa = Acl && xs", vt);
    REQUIRE(equivalent(sp(ctrl, pre, vt), expect, vt));
  }

  SECTION("act assignment from true") {
    FormulaPtr got = sp(Cmd::assign_act("Brk"), Formula::truth(true), vt);
    REQUIRE(equivalent(got, parse_formula("xa = Brk", vt), vt));
  }

  SECTION("soundness on random programs") {
    VarTable tv = testutil::test_vars();
    for (unsigned seed = 0; seed < 100; ++seed) {
      testutil::AstGen gen(9000 + seed, tv);
      CmdPtr c = gen.cmd(3);
      FormulaPtr pre = gen.formula(3);
      FormulaPtr post;
      try {
        post = simplify(sp(c, pre, tv), tv);
      } catch (const NonlinearError&) {
        continue;  // random programs may assign nonlinear expressions
      }
      for (unsigned vs = 0; vs < 5; ++vs) {
        Valuation s = gen.valuation();
        if (!holds_qf(pre, s)) continue;
        REQUIRE(holds(post, exec_cmd(c, s), tv));
      }
    }
  }
}

TEST_CASE("nonlinear assignments are rejected by sp, accepted by wp") {
  VarTable vt = fig2_vars();
  CmdPtr sq = parse_controller("cnt := cnt * cnt", vt);
  FormulaPtr post = parse_formula("cnt = 4", vt);
  // wp is pure substitution: cnt * cnt = 4 is produced but the decision
  // procedures refuse it.
  FormulaPtr pre = wp(sq, post, vt);
  REQUIRE_THROWS_AS(is_satisfiable(pre, vt), NonlinearError);
  REQUIRE_THROWS_AS(simplify(sp(sq, post, vt), vt), NonlinearError);
}

TEST_CASE("sensing postcondition rule") {
  VarTable vt = fig2_vars();

  FormulaPtr c0 = parse_formula("cnt = 0", vt);
  REQUIRE(equivalent(sp_sense(c0, "xs", true),
                     parse_formula("cnt = 0 && xs", vt), vt));
  REQUIRE(equivalent(sp_sense(c0, "xs", false),
                     parse_formula("cnt = 0 && !xs", vt), vt));
  // the previous sense value is forgotten before the new one is pinned
  REQUIRE(equivalent(sp_sense(Formula::sense("xs"), "xs", true),
                     Formula::sense("xs"), vt));
  REQUIRE(equivalent(sp_sense(Formula::sense("xs"), "xs", false),
                     Formula::negate(Formula::sense("xs")), vt));
}

TEST_CASE("quantifier elimination") {
  VarTable vt = fig2_vars();

  SECTION("one-point rule") {
    FormulaPtr f = parse_formula("exists v. v = 0 && cnt = v + 1", vt);
    REQUIRE(equivalent(qelim(f, vt), parse_formula("cnt = 1", vt), vt));
  }

  SECTION("trivial bodies") {
    REQUIRE(is_satisfiable(parse_formula("exists v. true", vt), vt));
    REQUIRE_FALSE(is_satisfiable(
        parse_formula("exists v. v >= 0 && v <= -1", vt), vt));
  }

  SECTION("projection keeps the implied constraint") {
    // exists v. cnt <= v && v < 2  ==>  cnt < 2
    FormulaPtr f = parse_formula("exists v. cnt <= v && v < 2", vt);
    REQUIRE(equivalent(qelim(f, vt), parse_formula("cnt < 2", vt), vt));
  }

  SECTION("universal quantifier via negation") {
    FormulaPtr f = parse_formula("forall v. v * 0 = 0", vt);
    REQUIRE(is_satisfiable(qelim(f, vt), vt));
    FormulaPtr g = parse_formula("forall v. v >= cnt", vt);
    REQUIRE_FALSE(is_satisfiable(qelim(g, vt), vt));
  }

  SECTION("elimination preserves truth at sampled extensions") {
    VarTable tv = testutil::test_vars();
    for (unsigned seed = 0; seed < 100; ++seed) {
      testutil::AstGen gen(100 + seed, tv);
      // body linear in cnt, y and the bound variable
      std::string v = tv.fresh_logical();
      FormulaPtr body = gen.formula(3);
      // inject the bound variable into one atom
      FormulaPtr withv = Formula::conj(
          body, Formula::cmp(gen.rop(),
                             AExp::bin(AOp::Add, AExp::logical(v),
                                       gen.linear_aexp()),
                             gen.linear_aexp()));
      FormulaPtr q = Formula::exists(v, withv);
      FormulaPtr elim = qelim(q, tv);
      REQUIRE(is_quantifier_free(elim));
      for (unsigned vs = 0; vs < 5; ++vs) {
        Valuation s = gen.valuation();
        bool truth = false;  // grid decision of the existential
        for (double g2 = -6.0; g2 <= 6.0 + 1e-9; g2 += 0.125)
          if (holds_qf(withv, s, {{v, g2}})) {
            truth = true;
            break;
          }
        // one-sided: a grid witness must survive elimination
        if (truth) REQUIRE(holds_qf(elim, s));
      }
    }
  }
}

TEST_CASE("satisfiability") {
  VarTable vt = fig2_vars();

  REQUIRE_FALSE(is_satisfiable(Formula::truth(false), vt));
  REQUIRE(is_satisfiable(
      parse_formula("cnt < 2 && cnt >= 1 && xa = Brk", vt), vt));
  REQUIRE_FALSE(is_satisfiable(parse_formula("cnt < 2 && cnt = 2", vt), vt));
  REQUIRE_FALSE(is_satisfiable(parse_formula("xa = Acl && xa = Brk", vt), vt));
  REQUIRE_FALSE(is_satisfiable(parse_formula("cnt < cnt", vt), vt));

  SECTION("agrees with exhaustive grid search") {
    VarTable gv;
    gv.think_vars = {"cnt"};
    gv.sense_vars = {"xs"};
    gv.modes = {"Acl", "Brk"};
    testutil::GridOracle oracle{gv};
    for (unsigned seed = 0; seed < 300; ++seed) {
      testutil::AstGen gen(seed, gv);
      FormulaPtr f = testutil::grid_formula(gen, 4);
      INFO("formula: " << pretty(f));
      REQUIRE(is_satisfiable(f, gv) == oracle.satisfiable(f));
    }
  }
}

TEST_CASE("model extraction") {
  VarTable vt = fig2_vars();

  SECTION("equality pins the value") {
    auto m = find_model(parse_formula("cnt = 0", vt), vt);
    REQUIRE(m);
    REQUIRE(m->reals.at("cnt") == 0.0);
  }

  SECTION("midpoint of a bounded region") {
    auto m = find_model(parse_formula("cnt >= 1 && cnt < 2", vt), vt);
    REQUIRE(m);
    REQUIRE(m->reals.at("cnt") == Catch::Approx(1.5));
  }

  SECTION("unconstrained formula still yields a model") {
    REQUIRE(find_model(Formula::truth(true), vt));
    REQUIRE_FALSE(find_model(Formula::truth(false), vt));
  }

  SECTION("models satisfy the formula (random)") {
    VarTable tv = testutil::test_vars();
    int found = 0;
    for (unsigned seed = 0; seed < 200; ++seed) {
      testutil::AstGen gen(7000 + seed, tv);
      FormulaPtr f = gen.formula(4);
      auto m = find_model(f, tv);
      REQUIRE(m.has_value() == is_satisfiable(f, tv));
      if (!m) continue;
      ++found;
      Valuation s;
      for (auto& v : tv.think_vars) {
        auto it = m->reals.find(v);
        s.think[v] = it == m->reals.end() ? 0.0 : it->second;
      }
      for (auto& v : tv.sense_vars) {
        auto it = m->sense.find(v);
        s.sense[v] = it != m->sense.end() && it->second;
      }
      s.act = m->modes.empty() ? tv.modes.front() : *m->modes.begin();
      INFO("formula: " << pretty(f));
      REQUIRE(holds_qf(f, s));
    }
    REQUIRE(found >= 50);
  }
}

TEST_CASE("simplification") {
  VarTable vt = fig2_vars();

  SECTION("dead branches vanish") {
    FormulaPtr raw = Formula::disj(
        Formula::conj(Formula::truth(true), parse_formula("cnt < 1", vt)),
        Formula::conj(Formula::negate(Formula::truth(true)),
                      parse_formula("cnt > 5", vt)));
    FormulaPtr s = simplify(raw, vt);
    REQUIRE(equivalent(s, parse_formula("cnt < 1", vt), vt));
    REQUIRE(equal(s, parse_formula("cnt < 1", vt)));
  }

  SECTION("distinct mode literals collapse to false") {
    FormulaPtr f = Formula::mode_eq(ModeExpr::lit("Brk"), ModeExpr::lit("Acl"));
    REQUIRE(simplify(f, vt)->kind == Formula::Kind::False);
  }

  SECTION("the conditioned wp of the running example") {
    CmdPtr ctrl = fig2_ctrl(vt);
    FormulaPtr raw = wp(ctrl, parse_formula("xa = Acl", vt), vt);
    FormulaPtr s = simplify(raw, vt);
    REQUIRE(equivalent(s, parse_formula("(xs && cnt < 1) || !xs", vt), vt));
  }

  SECTION("simplify preserves meaning on random formulas") {
    VarTable tv = testutil::test_vars();
    for (unsigned seed = 0; seed < 150; ++seed) {
      testutil::AstGen gen(4000 + seed, tv);
      FormulaPtr f = gen.formula(4);
      REQUIRE(equivalent(f, simplify(f, tv), tv));
    }
  }
}

TEST_CASE("equivalence checking") {
  VarTable vt = fig2_vars();
  FormulaPtr f = parse_formula("cnt = 0", vt);
  REQUIRE(equivalent(f, f, vt));
  REQUIRE(equivalent(parse_formula("cnt = 0 || cnt = 0", vt), f, vt));
  REQUIRE_FALSE(equivalent(f, parse_formula("cnt = 1", vt), vt));
  REQUIRE(entails(parse_formula("cnt = 1", vt),
                  parse_formula("cnt >= 0", vt), vt));
  REQUIRE_FALSE(entails(parse_formula("cnt >= 0", vt),
                        parse_formula("cnt = 1", vt), vt));
}

TEST_CASE("sense and act projection") {
  VarTable vt = fig2_vars();
  // projecting the sense variable forgets it
  FormulaPtr f = parse_formula("cnt = 1 && xs", vt);
  REQUIRE(equivalent(project_sense(f, vt), parse_formula("cnt = 1", vt), vt));
  // contradictory sense literals vanish entirely
  FormulaPtr g = parse_formula("cnt = 1 && xs && !xs", vt);
  REQUIRE_FALSE(is_satisfiable(project_sense(g, vt), vt));
  // act projection forgets the chosen mode
  FormulaPtr h = parse_formula("cnt = 1 && xa = Acl", vt);
  REQUIRE(equivalent(project_act(h, vt), parse_formula("cnt = 1", vt), vt));
}

TEST_CASE("variable regions") {
  VarTable vt = fig2_vars();
  IntervalSet r = var_region(
      parse_formula("(cnt >= 1 && cnt < 2) || cnt = 5", vt), "cnt", vt);
  REQUIRE(r.parts().size() == 2);
  REQUIRE(r.parts()[0].lo == 1.0);
  REQUIRE(r.parts()[0].hi == 2.0);
  REQUIRE(r.parts()[0].hi_open);
  REQUIRE(r.parts()[1].lo == 5.0);
  REQUIRE(r.parts()[1].hi == 5.0);
}
