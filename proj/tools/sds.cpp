// Command-line driver: input synthesis for sampled data systems.
//
//   sds synth    problem.sds [flags]   -> trace JSON (exit 0/1/2)
//   sds simulate problem.sds trace.json -> replay + verdict
//   sds fa       problem.sds K          -> print forward approximant K

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "sdsyn/problem_io.hpp"

using namespace sdsyn;

namespace {

void print_stats(const SearchStats& s) {
  std::cerr << "backtracks=" << s.backtracks << " expanded=" << s.expanded
            << " pruned=" << s.pruned << " fa_ms=" << s.fa_ms
            << " search_ms=" << s.search_ms << " synth_ms=" << s.synth_ms
            << "\n";
}

int run_synth(const std::string& file, const SolveOptions& opt,
              const std::string& out_path) {
  SynthesisProblem problem = load_problem(file);
  std::optional<Answer> ans;
  try {
    ans = solve(problem, opt);
  } catch (const DriftError& e) {
    std::cerr << "drift: " << e.what() << "\n";
    return 2;
  }
  if (!ans) {
    std::cerr << "no answer: the backward search exhausted the tree\n";
    return 1;
  }
  if (!verify_answer(problem, *ans, opt.eps_member, opt.ode_steps)) {
    std::cerr << "drift: synthesized answer failed replay verification\n";
    return 2;
  }
  print_stats(ans->stats);
  std::string json = trace_to_json(*ans).dump(2);
  if (out_path.empty()) {
    std::cout << json << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << json << "\n";
  }
  return 0;
}

int run_simulate(const std::string& file, const std::string& trace_path,
                 double eps_member, int ode_steps) {
  SynthesisProblem problem = load_problem(file);
  std::ifstream in(trace_path);
  if (!in) {
    std::cerr << "cannot open trace file: " << trace_path << "\n";
    return 2;
  }
  nlohmann::json j;
  in >> j;
  Answer ans = trace_from_json(j);
  if (static_cast<int>(ans.inputs.size()) != problem.steps)
    throw std::runtime_error("trace schema mismatch: trace has " +
                             std::to_string(ans.inputs.size()) +
                             " inputs, problem expects " +
                             std::to_string(problem.steps));
  auto trace = run(problem.system, ans.initial, ans.inputs, ode_steps);
  for (size_t k = 0; k < trace.size(); ++k) {
    std::cout << "step " << k << ": " << problem.system.plant_var << " = "
              << format_real(trace[k].p_state) << "  act = "
              << trace[k].c_state.act << "  {";
    bool first = true;
    for (auto& [v, x] : trace[k].c_state.think) {
      std::cout << (first ? "" : ", ") << v << " = " << format_real(x);
      first = false;
    }
    std::cout << "}\n";
  }
  bool ok = verify_answer(problem, ans, eps_member, ode_steps);
  std::cout << (ok ? "verified" : "NOT verified") << "\n";
  return ok ? 0 : 1;
}

int run_fa(const std::string& file, int k, bool truncate, int ode_steps) {
  SynthesisProblem problem = load_problem(file);
  if (k < 0 || k > problem.steps)
    throw std::runtime_error("k out of range: 0 <= k <= " +
                             std::to_string(problem.steps));
  FASequence fa = fa_sequence(problem, truncate, ode_steps);
  std::cout << pretty(fa.entries[k].c_cond) << " / "
            << to_string(fa.entries[k].p_cond)
            << (fa.truncated[k] ? "  (truncated)" : "") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"input synthesis for sampled data systems"};
  app.require_subcommand(1);

  std::string problem_file, trace_file, out_path, strategy_name = "robustness";
  unsigned seed = 0;
  bool no_truncate = false, retry_widen = false;
  int ode_steps = kDefaultOdeSteps;
  double tol = kMemberTol;
  int fa_k = 0;

  auto* synth = app.add_subcommand("synth", "synthesize an input sequence");
  synth->add_option("problem", problem_file, "problem file (.sds)")
      ->required();
  synth->add_option("--strategy", strategy_name,
                    "child ordering: random|volume|robustness")
      ->check(CLI::IsMember({"random", "volume", "robustness"}));
  synth->add_option("--seed", seed, "random-strategy seed");
  synth->add_flag("--no-truncate-fa", no_truncate,
                  "disable forward-approximation truncation");
  synth->add_option("--ode-steps", ode_steps, "RK4 steps per unit interval");
  synth->add_option("--tol", tol, "interval membership tolerance");
  synth->add_flag("--retry-widen", retry_widen,
                  "retry with widened sensor thresholds on drift");
  synth->add_option("--out", out_path, "trace output path (default stdout)");

  auto* sim = app.add_subcommand("simulate", "replay and verify a trace");
  sim->add_option("problem", problem_file, "problem file (.sds)")->required();
  sim->add_option("trace", trace_file, "trace file (JSON)")->required();
  sim->add_option("--ode-steps", ode_steps, "RK4 steps per unit interval");
  sim->add_option("--tol", tol, "interval membership tolerance");

  auto* fa = app.add_subcommand("fa", "print a forward approximant");
  fa->add_option("problem", problem_file, "problem file (.sds)")->required();
  fa->add_option("k", fa_k, "approximation index (0..T)")->required();
  fa->add_flag("--no-truncate-fa", no_truncate,
               "disable forward-approximation truncation");
  fa->add_option("--ode-steps", ode_steps, "RK4 steps per unit interval");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      SolveOptions opt;
      opt.strategy = strategy_name == "random"   ? Strategy::Random
                     : strategy_name == "volume" ? Strategy::Volume
                                                 : Strategy::Robustness;
      opt.seed = seed;
      opt.truncate_fa = !no_truncate;
      opt.ode_steps = ode_steps;
      opt.eps_member = tol;
      opt.retry_widen = retry_widen;
      return run_synth(problem_file, opt, out_path);
    }
    if (sim->parsed())
      return run_simulate(problem_file, trace_file, tol, ode_steps);
    if (fa->parsed()) return run_fa(problem_file, fa_k, !no_truncate, ode_steps);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
