// Problem-file loading, trace serialization, and the command-line surface.
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "sdsyn/problem_io.hpp"
#include "sdsyn/synth.hpp"

using namespace sdsyn;

namespace {

SynthesisProblem from_text(const std::string& text) {
  std::istringstream in(text);
  return load_problem_stream(in, "<test>");
}

const char* kMinimal = R"(
[modes]
Up: 0.5
Dn: -0.5
[controller]
if s then c := c + 1 else c := 0;
if c < 1 then xa := Up else xa := Dn
[sensor]
s: x + i >= 1
[input]
[-0.2, 0.2]
[pre]
c: c = 0
p: [0, 1]
[post]
c: true
p: [1, 2]
[steps]
3
)";

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

int run_cli(const std::string& args, const std::string& out_file) {
  std::string cmd = std::string(SDSYN_BIN) + " " + args + " > " + out_file +
                    " 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("problem files load") {
  SECTION("the bundled fixtures") {
    SynthesisProblem f2 = testutil::fig2();
    REQUIRE(f2.steps == 4);
    REQUIRE(f2.system.vars.modes == std::vector<Mode>{"Acl", "Brk"});
    REQUIRE(f2.system.vars.think_vars == std::vector<std::string>{"cnt"});
    REQUIRE(f2.system.vars.sense_vars == std::vector<std::string>{"xs"});
    REQUIRE(f2.system.plant_var == "v");
    REQUIRE(testutil::sets_close(f2.pre.p_cond,
                                 IntervalSet(Interval::closed(0.0, 1.0))));

    SynthesisProblem f1 = testutil::fig1();
    REQUIRE(f1.steps == 1000);
    REQUIRE(f1.system.vars.modes.size() == 3);
    REQUIRE(f1.system.sensor.preds.at("xs").size() == 2);
    REQUIRE(equivalent(f1.post.c_cond,
                       parse_formula("cnt = 100", f1.system.vars),
                       f1.system.vars));
  }

  SECTION("a minimal inline problem") {
    SynthesisProblem p = from_text(kMinimal);
    REQUIRE(p.steps == 3);
    REQUIRE(p.system.plant_var == "x");
    REQUIRE(p.system.vars.think_vars == std::vector<std::string>{"c"});
  }

  SECTION("validation errors") {
    // missing [post]
    std::string no_post(kMinimal);
    no_post.replace(no_post.find("[post]"), 6, "[pst]");
    REQUIRE_THROWS_AS(from_text(no_post), ProblemFileError);

    // two state variables in the dynamics
    std::string two_vars(kMinimal);
    two_vars.replace(two_vars.find("Dn: -0.5"), 8, "Dn: -y");
    REQUIRE_THROWS_AS(from_text(two_vars), ProblemFileError);

    // empty input domain
    std::string no_input(kMinimal);
    no_input.replace(no_input.find("[-0.2, 0.2]"), 11, "()");
    REQUIRE_THROWS_AS(from_text(no_input), ProblemFileError);

    // bad step count
    std::string bad_steps(kMinimal);
    bad_steps.replace(bad_steps.rfind("3"), 1, "-3");
    REQUIRE_THROWS_AS(from_text(bad_steps), ProblemFileError);

    // controller syntax error
    std::string bad_ctrl(kMinimal);
    bad_ctrl.replace(bad_ctrl.find("xa := Dn"), 8, "xa := ");
    REQUIRE_THROWS_AS(from_text(bad_ctrl), ProblemFileError);
  }
}

TEST_CASE("trace JSON round-trip") {
  SynthesisProblem prob = testutil::fig2();
  auto ans = solve(prob);
  REQUIRE(ans);

  nlohmann::json j = trace_to_json(*ans);
  Answer back = trace_from_json(j);

  REQUIRE(back.inputs == ans->inputs);
  REQUIRE(back.initial.p_state == ans->initial.p_state);
  REQUIRE(back.initial.c_state == ans->initial.c_state);
  REQUIRE(back.path == ans->path);
  REQUIRE(back.trace.size() == ans->trace.size());
  for (size_t k = 0; k < back.trace.size(); ++k) {
    REQUIRE(back.trace[k].p_state == ans->trace[k].p_state);
    REQUIRE(back.trace[k].c_state == ans->trace[k].c_state);
  }
  REQUIRE(back.stats.backtracks == ans->stats.backtracks);

  // the round-tripped answer still verifies
  REQUIRE(verify_answer(prob, back));

  SECTION("length mismatches are schema errors") {
    nlohmann::json bad = j;
    bad["inputs"].erase(0);
    REQUIRE_THROWS(trace_from_json(bad));
  }
}

TEST_CASE("solving is deterministic") {
  SynthesisProblem prob = testutil::fig2();
  SolveOptions opt;
  opt.strategy = Strategy::Random;
  opt.seed = 11;
  auto a = solve(prob, opt);
  auto b = solve(prob, opt);
  REQUIRE(a);
  REQUIRE(b);
  nlohmann::json ja = trace_to_json(*a), jb = trace_to_json(*b);
  // wall-clock times are the only permitted difference
  ja["stats"].erase("times_ms");
  jb["stats"].erase("times_ms");
  REQUIRE(ja.dump() == jb.dump());
}

TEST_CASE("command-line interface") {
  std::string fig2 = testutil::fixture("fig2.sds");
  std::string out = "/tmp/sdsyn_test_out.txt";
  std::string trace = "/tmp/sdsyn_test_trace.json";

  SECTION("synth writes a verifiable trace and exits 0") {
    REQUIRE(run_cli("synth " + fig2 + " --out " + trace, out) == 0);
    std::ifstream in(trace);
    nlohmann::json j = nlohmann::json::parse(in);
    Answer ans = trace_from_json(j);
    REQUIRE(ans.inputs.size() == 4);
    REQUIRE(verify_answer(testutil::fig2(), ans));

    SECTION("simulate accepts its own trace") {
      REQUIRE(run_cli("simulate " + fig2 + " " + trace, out) == 0);
      REQUIRE(slurp(out).find("verified") != std::string::npos);
    }

    SECTION("simulate rejects a corrupted input") {
      nlohmann::json bad = j;
      bad["inputs"][0] = 0.0;  // drops below the sensor threshold
      std::ofstream(trace + ".bad") << bad.dump();
      REQUIRE(run_cli("simulate " + fig2 + " " + trace + ".bad", out) == 1);
    }

    SECTION("simulate flags a wrong-length trace as a schema error") {
      nlohmann::json bad = j;
      bad["inputs"].erase(0);
      std::ofstream(trace + ".len") << bad.dump();
      REQUIRE(run_cli("simulate " + fig2 + " " + trace + ".len", out) == 2);
    }
  }

  SECTION("strategy and seed flags are honored") {
    REQUIRE(run_cli("synth " + fig2 + " --strategy volume --seed 7 --out " +
                        trace,
                    out) == 0);
    Answer ans = trace_from_json([&] {
      std::ifstream in(trace);
      return nlohmann::json::parse(in);
    }());
    REQUIRE(ans.inputs.size() == 4);
  }

  SECTION("an unreachable goal exits 1") {
    std::string bad = "/tmp/sdsyn_unreachable.sds";
    std::string text = slurp(fig2);
    text.replace(text.find("p: [1.5, 2]"), 11, "p: [10, 11]");
    std::ofstream(bad) << text;
    REQUIRE(run_cli("synth " + bad, out) == 1);
  }

  SECTION("a malformed problem file exits 2") {
    std::string bad = "/tmp/sdsyn_broken.sds";
    std::ofstream(bad) << "[modes]\nonly: 0.5\n";
    REQUIRE(run_cli("synth " + bad, out) == 2);
    REQUIRE(run_cli("synth /tmp/definitely_missing.sds", out) == 2);
  }

  SECTION("forward approximants are printable") {
    REQUIRE(run_cli("fa " + fig2 + " 0", out) == 0);
    REQUIRE(slurp(out).find("cnt = 0 / [0,1]") != std::string::npos);

    REQUIRE(run_cli("fa " + fig2 + " 1", out) == 0);
    std::string s1 = slurp(out);
    REQUIRE(s1.find("xa = Acl") != std::string::npos);
    REQUIRE(s1.find("[0.9999") != std::string::npos);  // about [1, 1.5]

    REQUIRE(run_cli("fa " + fig2 + " 2", out) == 0);
    REQUIRE(slurp(out).find("(truncated)") != std::string::npos);

    REQUIRE(run_cli("fa " + fig2 + " 9", out) == 2);  // out of range
  }
}
