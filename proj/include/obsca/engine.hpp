#pragma once
// Simulation driver: applies a rule table to a configuration, recomputing
// only cells whose window could have changed, with optional deterministic
// multithreading (results are identical for every thread count).

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "obsca/grid.hpp"
#include "obsca/rules.hpp"

namespace obsca {

struct ParticleInfo {
  Position at;
  State state = fstate::Zero;  // fstate::U or fstate::D
  bool well_formed = false;    // half of a vertical pair: U just above D
};

class Simulator {
 public:
  Simulator(RuleTablePtr rule, Configuration start, int threads = 1);

  void step();
  void run(int steps);

  const Configuration& current() const { return cur_; }
  std::int64_t time() const { return time_; }
  int threads() const { return threads_; }
  void set_threads(int threads);

  // Positions recomputed by the most recent step (empty before any step).
  std::size_t last_active() const { return last_active_; }

 private:
  RuleTablePtr rule_;
  Configuration cur_;
  std::int64_t time_ = 0;
  int threads_ = 1;
  std::size_t last_active_ = 0;
  // Cells whose state changed in the previous step; the next step recomputes
  // exactly the dilation of this set by the rule radius.
  std::unordered_set<Position, PositionHash> changed_;
  bool fresh_ = true;  // no step taken yet: recompute the dilated support
};

// One synchronous update of x under the rule.
Configuration step(const RuleTable& rule, const Configuration& x, int threads = 1);

// n synchronous updates.
Configuration run(const RuleTable& rule, Configuration x, int steps, int threads = 1);

// Particle census of a configuration (states U and D), sorted by position.
// A half is well-formed when it completes a vertical pair with U just above
// D: U at z + (0, 1) and D at z.
std::vector<ParticleInfo> particles(const Configuration& x);

}  // namespace obsca
