// Problem-file (.sds) loading and trace (JSON) serialization.
//
// A problem file is sectioned plain text:
//
//   [modes]         one `name: rhs-expression` per line (declaration order
//                   is significant; rhs over t and the plant variable)
//   [controller]    the controller program (may span lines)
//   [sensor]        one `sensevar: affine-predicate` per line
//   [input]         the input domain, e.g. [-0.2, 0.2]
//   [pre] / [post]  `c: formula` and `p: interval-set` lines
//   [steps]         the horizon T
//
// `#` starts a comment. The plant state variable is inferred from the mode
// right-hand sides; think variables are discovered from the controller text.
#pragma once

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdsyn/parser.hpp"
#include "sdsyn/synth.hpp"
#include "sdsyn/system.hpp"

namespace sdsyn {

struct ProblemFileError : std::runtime_error {
  explicit ProblemFileError(const std::string& msg)
      : std::runtime_error(msg) {}
};

namespace detail {

struct Sections {
  std::map<std::string, std::vector<std::string>> lines;  // per section
};

inline Sections split_sections(std::istream& in, const std::string& origin) {
  Sections s;
  std::string line, current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    if (line.front() == '[' && line.back() == ']' &&
        line.find(',') == std::string::npos) {
      current = line.substr(1, line.size() - 2);
      s.lines[current];  // mark present
      continue;
    }
    if (current.empty())
      throw ProblemFileError(origin + ":" + std::to_string(lineno) +
                             ": text before the first section header");
    s.lines[current].push_back(line);
  }
  return s;
}

inline std::pair<std::string, std::string> split_key(const std::string& line,
                                                     const std::string& where) {
  auto pos = line.find(':');
  if (pos == std::string::npos)
    throw ProblemFileError("[" + where + "]: expected 'name: ...' in '" +
                           line + "'");
  std::string key = line.substr(0, pos);
  auto end = key.find_last_not_of(" \t");
  key = key.substr(0, end + 1);
  std::string val = line.substr(pos + 1);
  auto start = val.find_first_not_of(" \t");
  val = start == std::string::npos ? "" : val.substr(start);
  return {key, val};
}

inline std::vector<std::string> idents_of(const std::string& text) {
  std::vector<std::string> out;
  Lexer lex(text);
  while (!lex.at_end()) {
    Token t = lex.next();
    if (t.kind == Token::Kind::Ident) out.push_back(t.text);
  }
  return out;
}

}  // namespace detail

inline SynthesisProblem load_problem_stream(std::istream& in,
                                            const std::string& origin) {
  detail::Sections sec = detail::split_sections(in, origin);
  for (const char* name :
       {"modes", "controller", "sensor", "input", "pre", "post", "steps"})
    if (!sec.lines.count(name))
      throw ProblemFileError(origin + ": missing section [" +
                             std::string(name) + "]");

  SynthesisProblem prob;
  SystemSpec& sys = prob.system;
  VarTable& vt = sys.vars;

  // modes and their dynamics
  std::vector<std::pair<Mode, std::string>> modes;
  for (auto& line : sec.lines["modes"]) {
    auto [name, rhs] = detail::split_key(line, "modes");
    modes.emplace_back(name, rhs);
    vt.modes.push_back(name);
  }
  if (modes.empty()) throw ProblemFileError(origin + ": [modes] is empty");

  // plant state variable: the one identifier besides t/log in the dynamics
  std::set<std::string> plant_idents;
  for (auto& [_, rhs] : modes)
    for (auto& id : detail::idents_of(rhs))
      if (id != "t" && id != "log") plant_idents.insert(id);
  if (plant_idents.size() > 1)
    throw ProblemFileError(origin +
                           ": [modes]: more than one state variable in the "
                           "dynamics (plants are one-dimensional)");
  sys.plant_var = plant_idents.empty() ? "x" : *plant_idents.begin();
  for (auto& [name, rhs] : modes) {
    try {
      sys.plant.emplace(name, PlantRhs::parse(rhs, sys.plant_var));
    } catch (const ParseError& e) {
      throw ProblemFileError(origin + ": [modes] " + name + ": " + e.what());
    }
  }

  // sensor
  for (auto& line : sec.lines["sensor"]) {
    auto [name, pred] = detail::split_key(line, "sensor");
    vt.sense_vars.push_back(name);
    try {
      sys.sensor.preds[name] = SensorSpec::parse_pred(pred, sys.plant_var);
    } catch (const std::exception& e) {
      throw ProblemFileError(origin + ": [sensor] " + name + ": " + e.what());
    }
  }

  // input domain
  {
    std::string text;
    for (auto& line : sec.lines["input"]) text += line + " ";
    try {
      sys.sensor.input_range = parse_interval_set(text);
    } catch (const std::exception& e) {
      throw ProblemFileError(origin + ": [input]: " + e.what());
    }
    if (sys.sensor.input_range.is_empty())
      throw ProblemFileError(origin + ": [input]: empty input domain");
  }

  // controller: discover think variables, then parse
  std::string ctrl_text;
  for (auto& line : sec.lines["controller"]) ctrl_text += line + "\n";
  {
    std::set<std::string> known{"skip", "if",   "then", "else",
                                "switch", "true", "false", vt.act_var};
    for (auto& v : vt.sense_vars) known.insert(v);
    for (auto& m : vt.modes) known.insert(m);
    for (auto& id : detail::idents_of(ctrl_text))
      if (!known.count(id) && !vt.is_think(id)) vt.think_vars.push_back(id);
  }
  try {
    sys.controller = parse_controller(ctrl_text, vt);
  } catch (const ParseError& e) {
    throw ProblemFileError(origin + ": [controller]: " + e.what());
  }

  // pre / post
  auto read_cp = [&](const std::string& name) {
    CPCondition cp;
    std::string ctext, ptext;
    for (auto& line : sec.lines[name]) {
      auto [key, val] = detail::split_key(line, name);
      if (key == "c")
        ctext += (ctext.empty() ? "" : " ") + val;
      else if (key == "p")
        ptext += (ptext.empty() ? "" : " ") + val;
      else
        throw ProblemFileError(origin + ": [" + name + "]: unknown key '" +
                               key + "'");
    }
    if (ctext.empty() || ptext.empty())
      throw ProblemFileError(origin + ": [" + name +
                             "]: need both 'c:' and 'p:' lines");
    try {
      cp.c_cond = parse_formula(ctext, vt);
      cp.p_cond = parse_interval_set(ptext);
    } catch (const std::exception& e) {
      throw ProblemFileError(origin + ": [" + name + "]: " + e.what());
    }
    return cp;
  };
  prob.pre = read_cp("pre");
  prob.post = read_cp("post");

  // steps
  {
    std::string text;
    for (auto& line : sec.lines["steps"]) text += line;
    try {
      size_t pos = 0;
      prob.steps = std::stoi(text, &pos);
      if (pos != text.size() || prob.steps < 0) throw std::exception();
    } catch (...) {
      throw ProblemFileError(origin +
                             ": [steps]: expected a non-negative integer");
    }
  }
  return prob;
}

inline SynthesisProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProblemFileError("cannot open problem file: " + path);
  return load_problem_stream(in, path);
}

// --- trace JSON ------------------------------------------------------------

inline nlohmann::json state_to_json(const SystemState& st) {
  nlohmann::json j;
  j["think"] = st.c_state.think;
  j["sense"] = st.c_state.sense;
  j["act"] = st.c_state.act;
  j["p"] = st.p_state;
  return j;
}

inline SystemState state_from_json(const nlohmann::json& j) {
  SystemState st;
  st.c_state.think = j.at("think").get<std::map<std::string, double>>();
  st.c_state.sense = j.at("sense").get<std::map<std::string, bool>>();
  st.c_state.act = j.at("act").get<std::string>();
  st.p_state = j.at("p").get<double>();
  return st;
}

inline nlohmann::json trace_to_json(const Answer& ans) {
  nlohmann::json j;
  j["initial"] = state_to_json(ans.initial);
  j["inputs"] = ans.inputs;
  j["path"] = nlohmann::json::array();
  for (auto& [sout, m] : ans.path)
    j["path"].push_back({{"sense", sout}, {"mode", m}});
  j["trace"] = nlohmann::json::array();
  for (auto& st : ans.trace) j["trace"].push_back(state_to_json(st));
  j["stats"] = {{"backtracks", ans.stats.backtracks},
                {"expanded", ans.stats.expanded},
                {"pruned", ans.stats.pruned},
                {"times_ms",
                 {{"fa", ans.stats.fa_ms},
                  {"search", ans.stats.search_ms},
                  {"synth", ans.stats.synth_ms}}}};
  return j;
}

inline Answer trace_from_json(const nlohmann::json& j) {
  Answer ans;
  ans.initial = state_from_json(j.at("initial"));
  ans.inputs = j.at("inputs").get<std::vector<double>>();
  for (auto& e : j.at("path")) {
    SenseReading r = e.at("sense").get<SenseReading>();
    ans.path.emplace_back(r, e.at("mode").get<std::string>());
  }
  for (auto& e : j.at("trace")) ans.trace.push_back(state_from_json(e));
  if (j.contains("stats")) {
    const auto& s = j.at("stats");
    ans.stats.backtracks = s.value("backtracks", 0L);
    ans.stats.expanded = s.value("expanded", 0L);
    ans.stats.pruned = s.value("pruned", 0L);
  }
  if (ans.trace.size() != ans.inputs.size() + 1 ||
      ans.path.size() != ans.inputs.size())
    throw std::runtime_error(
        "trace schema mismatch: inconsistent inputs/path/trace lengths");
  return ans;
}

}  // namespace sdsyn
