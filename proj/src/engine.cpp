#include "obsca/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace obsca {

namespace {

// Window of x centered at p (side = 2r+1, top row first).
void gather_window(const Configuration& x, Position p, int r, State* out) {
  const int side = 2 * r + 1;
  for (int wy = 0; wy < side; ++wy)
    for (int wx = 0; wx < side; ++wx)
      out[wy * side + wx] = x.get({p.x - r + wx, p.y + r - wy});
}

// Sorted candidate cells whose window intersects `seeds`: the dilation of the
// seed set by the rule radius.
std::vector<Position> dilate_sorted(const std::vector<Position>& seeds, int r) {
  std::unordered_set<Position, PositionHash> set;
  set.reserve(seeds.size() * (2 * r + 1) * (2 * r + 1));
  for (Position p : seeds)
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx) set.insert({p.x + dx, p.y + dy});
  std::vector<Position> out(set.begin(), set.end());
  std::sort(out.begin(), out.end());
  return out;
}

// New states for the sorted candidate list; deterministic for any thread
// count (each worker fills a disjoint slice of the result vector).
std::vector<State> evaluate(const RuleTable& rule, const Configuration& x,
                            const std::vector<Position>& candidates, int threads) {
  const int r = rule.radius();
  std::vector<State> next(candidates.size());
  const auto work = [&](std::size_t lo, std::size_t hi) {
    std::vector<State> window(rule.window_cells());
    for (std::size_t i = lo; i < hi; ++i) {
      gather_window(x, candidates[i], r, window.data());
      next[i] = rule.apply(window.data());
    }
  };
  const std::size_t n = candidates.size();
  if (threads <= 1 || n < 64) {
    work(0, n);
    return next;
  }
  const std::size_t nt = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const std::size_t lo = n * t / nt, hi = n * (t + 1) / nt;
    pool.emplace_back(work, lo, hi);
  }
  for (auto& th : pool) th.join();
  return next;
}

}  // namespace

Simulator::Simulator(RuleTablePtr rule, Configuration start, int threads)
    : rule_(std::move(rule)), cur_(std::move(start)) {
  if (!rule_) throw std::invalid_argument("Simulator: null rule");
  if (cur_.alphabet() && cur_.alphabet() != rule_->alphabet() &&
      cur_.alphabet()->name() != rule_->alphabet()->name())
    throw std::invalid_argument("Simulator: configuration/rule alphabet mismatch");
  if (cur_.background() != rule_->background())
    throw std::invalid_argument("Simulator: configuration background differs from rule");
  set_threads(threads);
}

void Simulator::set_threads(int threads) { threads_ = std::max(1, threads); }

void Simulator::step() {
  std::vector<Position> seeds;
  if (fresh_) {
    seeds = cur_.sorted_support();
    fresh_ = false;
  } else {
    seeds.assign(changed_.begin(), changed_.end());
  }
  const std::vector<Position> candidates = dilate_sorted(seeds, rule_->radius());
  const std::vector<State> next = evaluate(*rule_, cur_, candidates, threads_);

  changed_.clear();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (cur_.get(candidates[i]) != next[i]) changed_.insert(candidates[i]);
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) cur_.set(candidates[i], next[i]);
  last_active_ = candidates.size();
  ++time_;
}

void Simulator::run(int steps) {
  for (int i = 0; i < steps; ++i) step();
}

Configuration step(const RuleTable& rule, const Configuration& x, int threads) {
  Configuration out = x;
  std::vector<Position> seeds = x.sorted_support();
  const std::vector<Position> candidates = dilate_sorted(seeds, rule.radius());
  const std::vector<State> next = evaluate(rule, x, candidates, threads);
  for (std::size_t i = 0; i < candidates.size(); ++i) out.set(candidates[i], next[i]);
  return out;
}

Configuration run(const RuleTable& rule, Configuration x, int steps, int threads) {
  Simulator sim(std::shared_ptr<const RuleTable>(std::shared_ptr<void>(), &rule),
                std::move(x), threads);
  sim.run(steps);
  return sim.current();
}

std::vector<ParticleInfo> particles(const Configuration& x) {
  std::vector<ParticleInfo> out;
  for (const Position p : x.sorted_support()) {
    const State s = x.get(p);
    if (s != fstate::U && s != fstate::D) continue;
    ParticleInfo info;
    info.at = p;
    info.state = s;
    if (s == fstate::U)
      info.well_formed = x.get({p.x, p.y - 1}) == fstate::D;
    else
      info.well_formed = x.get({p.x, p.y + 1}) == fstate::U;
    out.push_back(info);
  }
  return out;
}

}  // namespace obsca
