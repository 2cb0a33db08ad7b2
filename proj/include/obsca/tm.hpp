#pragma once
// Deterministic single-tape Turing machines on a semi-infinite (rightward)
// tape. These are the computational payload of the obstacle compilers: a
// machine's space-time diagram becomes the interior of a compiled obstacle,
// and run_tm() is the ground truth those compilations are tested against.
//
// Conventions:
//   - The tape starts all-blank; the head starts on cell 0 in the initial
//     state. Cell indices never go negative (a left move from cell 0 is an
//     error in the run, and a machine that does it is outside the contract).
//   - `halt` is the single final state: it has no outgoing transitions, and
//     entering it ends the run. "Halted at step k" means the machine is in
//     the halt state after exactly k transitions.
//   - The transition map may be partial; reaching an undefined (state,
//     symbol) pair is reported as an error ("stuck"), not as halting.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "obsca/util.hpp"

namespace obsca {

struct TuringMachine {
  // What a transition does: enter `state`, write `symbol`, move the head.
  struct Action {
    std::string state;
    std::string symbol;
    char move = 'R';  // 'L' or 'R'
  };

  std::string initial;  // start state
  std::string halt;     // single final state; no outgoing transitions
  std::string blank;    // symbol filling the empty tape

  // (current state, read symbol) -> action. Partial.
  std::map<std::pair<std::string, std::string>, Action> delta;

  // All state / symbol names referenced anywhere (headers and transitions),
  // sorted and deduplicated.
  std::vector<std::string> state_names() const;
  std::vector<std::string> symbol_names() const;
};

// Structural validation: nonempty headers, moves in {L,R}, no transitions out
// of the halt state. Returns an explanatory error when malformed.
Result<bool> check_tm(const TuringMachine& m);

// True when delta is defined on every (state, symbol) pair with state != halt.
// The obstacle compilers require this: a machine that can get stuck has no
// meaningful halting/looping dichotomy for them to encode.
bool tm_total(const TuringMachine& m);

// One instant of a run. Cells beyond tape.size() are blank.
struct TmConfig {
  std::string state;
  int head = 0;
  std::vector<std::string> tape;
};

struct TmRun {
  bool halted = false;  // reached the halt state within max_steps transitions
  int steps = 0;        // halted: the step entering halt; running: max_steps
  std::vector<TmConfig> trace;  // configs at times 0..steps
};

// Simulates m on the empty tape for at most max_steps transitions.
// Errors: malformed machine, undefined transition reached, head moved left of
// cell 0. Requires max_steps >= 0.
Result<TmRun> run_tm(const TuringMachine& m, int max_steps);

// Text format ("tm v1"):
//   tm v1
//   initial: q0
//   final: qf
//   blank: _
//   q0 _ -> q1 a R
//   ...one transition per line: state symbol -> state symbol L|R
// '#' starts a comment; blank lines are ignored. Names are whitespace-free
// tokens. serialize_tm emits transitions in sorted key order; parse_tm
// reports errors with line numbers.
std::string serialize_tm(const TuringMachine& m);
Result<TuringMachine> parse_tm(const std::string& text);

}  // namespace obsca
