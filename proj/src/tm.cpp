#include "obsca/tm.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace obsca {

namespace {

std::vector<std::string> sorted_unique(std::set<std::string> s) {
  return {s.begin(), s.end()};
}

}  // namespace

std::vector<std::string> TuringMachine::state_names() const {
  std::set<std::string> s{initial, halt};
  for (const auto& [key, act] : delta) {
    s.insert(key.first);
    s.insert(act.state);
  }
  return sorted_unique(std::move(s));
}

std::vector<std::string> TuringMachine::symbol_names() const {
  std::set<std::string> s{blank};
  for (const auto& [key, act] : delta) {
    s.insert(key.second);
    s.insert(act.symbol);
  }
  return sorted_unique(std::move(s));
}

Result<bool> check_tm(const TuringMachine& m) {
  if (m.initial.empty()) return Error{"machine has no initial state"};
  if (m.halt.empty()) return Error{"machine has no final state"};
  if (m.blank.empty()) return Error{"machine has no blank symbol"};
  for (const auto& [key, act] : m.delta) {
    if (key.first == m.halt) {
      return Error{"transition out of the final state '" + m.halt + "'"};
    }
    if (act.move != 'L' && act.move != 'R') {
      return Error{"transition (" + key.first + ", " + key.second +
                   ") has move '" + std::string(1, act.move) + "', want L or R"};
    }
    if (key.first.empty() || key.second.empty() || act.state.empty() || act.symbol.empty()) {
      return Error{"transition with an empty name"};
    }
  }
  return true;
}

bool tm_total(const TuringMachine& m) {
  const std::vector<std::string> symbols = m.symbol_names();
  for (const std::string& q : m.state_names()) {
    if (q == m.halt) continue;
    for (const std::string& s : symbols) {
      if (!m.delta.count({q, s})) return false;
    }
  }
  return true;
}

Result<TmRun> run_tm(const TuringMachine& m, int max_steps) {
  if (max_steps < 0) return Error{"run_tm: max_steps must be >= 0"};
  if (Result<bool> ok = check_tm(m); !ok.ok()) return ok.error();

  TmRun run;
  TmConfig cfg;
  cfg.state = m.initial;
  cfg.head = 0;
  run.trace.push_back(cfg);

  for (int t = 0;; ++t) {
    if (cfg.state == m.halt) {
      run.halted = true;
      run.steps = t;
      return run;
    }
    if (t == max_steps) break;
    const std::string read =
        cfg.head < static_cast<int>(cfg.tape.size()) ? cfg.tape[cfg.head] : m.blank;
    auto it = m.delta.find({cfg.state, read});
    if (it == m.delta.end()) {
      return Error{"machine is stuck at step " + std::to_string(t) + ": no transition for (" +
                   cfg.state + ", " + read + ")"};
    }
    const TuringMachine::Action& act = it->second;
    while (cfg.head >= static_cast<int>(cfg.tape.size())) cfg.tape.push_back(m.blank);
    cfg.tape[cfg.head] = act.symbol;
    cfg.state = act.state;
    cfg.head += act.move == 'R' ? 1 : -1;
    if (cfg.head < 0) {
      return Error{"machine moved left of cell 0 at step " + std::to_string(t)};
    }
    run.trace.push_back(cfg);
  }
  run.halted = false;
  run.steps = max_steps;
  return run;
}

std::string serialize_tm(const TuringMachine& m) {
  std::ostringstream out;
  out << "tm v1\n";
  out << "initial: " << m.initial << "\n";
  out << "final: " << m.halt << "\n";
  out << "blank: " << m.blank << "\n";
  for (const auto& [key, act] : m.delta) {
    out << key.first << " " << key.second << " -> " << act.state << " " << act.symbol << " "
        << act.move << "\n";
  }
  return out.str();
}

namespace {

// Splits a line into whitespace-separated tokens, dropping '#' comments.
std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

Error tm_err(int line_no, const std::string& what) {
  return Error{"tm line " + std::to_string(line_no) + ": " + what};
}

}  // namespace

Result<TuringMachine> parse_tm(const std::string& text) {
  TuringMachine m;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool saw_magic = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> tok = tokens_of(line);
    if (tok.empty()) continue;
    if (!saw_magic) {
      if (tok.size() != 2 || tok[0] != "tm" || tok[1] != "v1") {
        return tm_err(line_no, "expected header 'tm v1'");
      }
      saw_magic = true;
      continue;
    }
    if (tok[0] == "initial:" || tok[0] == "final:" || tok[0] == "blank:") {
      if (tok.size() != 2) return tm_err(line_no, "expected '" + tok[0] + " <name>'");
      std::string& field = tok[0] == "initial:" ? m.initial : tok[0] == "final:" ? m.halt : m.blank;
      if (!field.empty()) return tm_err(line_no, "duplicate " + tok[0] + " header");
      field = tok[1];
      continue;
    }
    // Transition: state symbol -> state symbol L|R
    if (tok.size() != 6 || tok[2] != "->") {
      return tm_err(line_no, "expected 'state symbol -> state symbol L|R'");
    }
    if (tok[5] != "L" && tok[5] != "R") {
      return tm_err(line_no, "move must be L or R, got '" + tok[5] + "'");
    }
    std::pair<std::string, std::string> key{tok[0], tok[1]};
    if (m.delta.count(key)) {
      return tm_err(line_no, "duplicate transition for (" + tok[0] + ", " + tok[1] + ")");
    }
    m.delta[key] = TuringMachine::Action{tok[3], tok[4], tok[5][0]};
  }
  if (!saw_magic) return Error{"tm: empty input, expected header 'tm v1'"};
  if (Result<bool> ok = check_tm(m); !ok.ok()) return ok.error();
  return m;
}

}  // namespace obsca
