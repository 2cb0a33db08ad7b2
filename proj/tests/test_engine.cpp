#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include "obsca/engine.hpp"
#include "obsca/fdef.hpp"
#include "obsca/rules.hpp"
#include "obsca/sft.hpp"
#include "obsca/util.hpp"

using namespace obsca;

namespace {

// A left-moving particle: U just above D, lower half at z.
void put_pair(Configuration& x, Position z) {
  x.set(z, fstate::D);
  x.set({z.x, z.y + 1}, fstate::U);
}

// Obstacle field with pairwise gaps >= 4: obstacles live on a coarse lattice
// with bounded jitter, so admissibility never depends on the draw.
Configuration random_field(Rng& rng, int max_obstacles, bool with_particles) {
  Configuration x = f_configuration();
  std::vector<std::pair<int, int>> cells;
  const int n = 1 + static_cast<int>(rng.below(max_obstacles));
  for (int i = 0; i < n; ++i)
    cells.emplace_back(static_cast<int>(rng.range(-2, 2)),
                       static_cast<int>(rng.range(-2, 2)));
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  for (auto [cx, cy] : cells) {
    const Position origin{cx * 12 + static_cast<int>(rng.range(0, 2)),
                          cy * 12 + static_cast<int>(rng.range(0, 2))};
    paint_obstacle(x, origin, static_cast<int>(rng.range(1, 4)),
                   static_cast<int>(rng.range(1, 4)));
  }
  if (with_particles) {
    // Pairs on the coarse lattice midlines, far from every footprint.
    const int pairs = static_cast<int>(rng.below(3));
    for (int i = 0; i < pairs; ++i)
      put_pair(x, {static_cast<int>(rng.range(-2, 2)) * 12 + 7,
                   static_cast<int>(rng.range(-2, 2)) * 12 + 7});
  }
  return x;
}

// Arbitrary junk in a small box (any states, no admissibility promise).
Configuration random_junk(Rng& rng) {
  Configuration x = f_configuration();
  const int n = 3 + static_cast<int>(rng.below(25));
  for (int i = 0; i < n; ++i)
    x.set({static_cast<int>(rng.range(-6, 6)), static_cast<int>(rng.range(-6, 6))},
          static_cast<State>(rng.below(fstate::Count)));
  return x;
}

bool support_within_dilation(const Configuration& next, const Configuration& prev,
                             int r) {
  for (const auto& [p, s] : next.support()) {
    (void)s;
    bool near = false;
    for (int dy = -r; dy <= r && !near; ++dy)
      for (int dx = -r; dx <= r && !near; ++dx)
        if (prev.support().count({p.x + dx, p.y + dy})) near = true;
    if (!near) return false;
  }
  return true;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("quiescence: the empty configuration is fixed") {
  auto rule = f_rule_table();
  Configuration x = f_configuration();
  CHECK(step(*rule, x).empty());
  Simulator sim(rule, x);
  sim.run(5);
  CHECK(sim.current().empty());
  CHECK(sim.time() == 5);
}

TEST_CASE("free particle moves left at speed one") {
  auto rule = f_rule_table();
  Configuration x = f_configuration();
  put_pair(x, {0, 0});
  Simulator sim(rule, x);
  for (int t = 1; t <= 100; ++t) {
    sim.step();
    const Configuration& cur = sim.current();
    REQUIRE(cur.support_size() == 2);
    CHECK(cur.get({-t, 0}) == fstate::D);
    CHECK(cur.get({-t, 1}) == fstate::U);
    const auto ps = particles(cur);
    REQUIRE(ps.size() == 2);
    CHECK(ps[0].well_formed);
    CHECK(ps[1].well_formed);
  }
}

TEST_CASE("lone states die in one step") {
  auto rule = f_rule_table();
  for (State s : {fstate::One, fstate::U, fstate::D, fstate::TopEdge,
                  fstate::BottomLeft}) {
    Configuration x = f_configuration();
    x.set({0, 0}, s);
    CHECK(step(*rule, x).empty());
  }
}

TEST_CASE("obstacles are fixed points for 100 steps") {
  auto rule = f_rule_table();
  for (int w = 1; w <= 6; ++w)
    for (int h = 1; h <= 6; ++h) {
      Configuration x = f_configuration();
      paint_obstacle(x, {0, 0}, w, h);
      Simulator sim(rule, x);
      sim.run(100);
      CHECK(sim.current() == x);
    }
}

TEST_CASE("admissible particle-free fields are fixed points") {
  auto rule = f_rule_table();
  Rng rng(0x51a9);
  for (int trial = 0; trial < 15; ++trial) {
    Configuration x = random_field(rng, 5, false);
    REQUIRE(violations(x, rule->case1_library()).value().empty());
    CHECK(step(*rule, x) == x);
  }
}

TEST_CASE("particle bypasses an obstacle and recomposes to the west") {
  auto rule = f_rule_table();
  Configuration x = f_configuration();
  paint_obstacle(x, {0, 0}, 2, 2);  // footprint (-1,-1)..(2,2)
  put_pair(x, {6, 0});              // heading straight for the east face
  const Configuration obstacle_only = [&] {
    Configuration o = f_configuration();
    paint_obstacle(o, {0, 0}, 2, 2);
    return o;
  }();

  Simulator sim(rule, x);
  bool recomposed_west = false;
  for (int t = 0; t < 60 && !recomposed_west; ++t) {
    sim.step();
    const Configuration& cur = sim.current();
    // The obstacle itself never changes while the particle passes.
    for (const auto& [p, s] : obstacle_only.support()) CHECK(cur.get(p) == s);
    // Exactly one U and one D at all times.
    const auto ps = particles(cur);
    REQUIRE(ps.size() == 2);
    CHECK(cur.support_size() == obstacle_only.support_size() + 2);
    if (ps[0].well_formed && ps[1].well_formed && ps[0].at.x < -2) {
      CHECK(ps[0].at.x == ps[1].at.x);
      recomposed_west = true;
    }
  }
  CHECK(recomposed_west);
}

TEST_CASE("update commutes with shifts") {
  auto rule = f_rule_table();
  Rng rng(0xc0de);
  for (int trial = 0; trial < 12; ++trial) {
    Configuration x = trial % 2 == 0 ? random_field(rng, 4, true) : random_junk(rng);
    const Position m{static_cast<int>(rng.range(-9, 9)),
                     static_cast<int>(rng.range(-9, 9))};
    CHECK(step(*rule, shift(x, m)) == shift(step(*rule, x), m));
  }
}

TEST_CASE("support growth is bounded by the radius-2 dilation") {
  auto rule = f_rule_table();
  Rng rng(0xfeed);
  for (int trial = 0; trial < 20; ++trial) {
    Configuration x = random_junk(rng);
    Configuration y = step(*rule, x);
    CHECK(support_within_dilation(y, x, rule->radius()));
  }
}

TEST_CASE("incremental simulator matches the reference update") {
  auto rule = f_rule_table();
  Rng rng(0xab1e);
  for (int trial = 0; trial < 10; ++trial) {
    Configuration x = trial % 2 == 0 ? random_field(rng, 4, true) : random_junk(rng);
    Simulator sim(rule, x, 3);
    Configuration ref = x;
    for (int t = 0; t < 12; ++t) {
      sim.step();
      ref = step(*rule, ref);
      REQUIRE(sim.current() == ref);
    }
  }
}

TEST_CASE("results are independent of the thread count") {
  auto rule = f_rule_table();
  Rng rng(0x7777);
  for (int trial = 0; trial < 6; ++trial) {
    Configuration x = random_field(rng, 5, true);
    const Configuration a = run(*rule, x, 15, 1);
    const Configuration b = run(*rule, x, 15, 4);
    const Configuration c = run(*rule, x, 15, 13);
    CHECK(a == b);
    CHECK(a == c);
  }
}

TEST_CASE("violation scopes differ exactly on material seen at distance two") {
  // A stray 1 two cells east of a wall: the wall cell's own window is clean,
  // but a neighboring window inside its 5x5 is not.
  Configuration x = f_configuration();
  paint_obstacle(x, {0, 0}, 1, 1);  // footprint (-1,-1)..(1,1), east wall x=1
  x.set({3, 0}, fstate::One);

  Configuration center_next = step(*f_rule_table(ViolationScope::CenterWindow), x);
  Configuration any_next = step(*f_rule_table(ViolationScope::AnyWindowIn5x5), x);

  CHECK(center_next.get({3, 0}) == fstate::Zero);  // the stray dies either way
  CHECK(any_next.get({3, 0}) == fstate::Zero);
  CHECK(center_next.get({1, 0}) == fstate::RightEdge);  // survives one step
  CHECK(any_next.get({1, 0}) == fstate::Zero);          // dies immediately

  // Both scopes leave valid fields alone.
  Configuration clean = f_configuration();
  paint_obstacle(clean, {0, 0}, 3, 2);
  CHECK(step(*f_rule_table(ViolationScope::CenterWindow), clean) == clean);
  CHECK(step(*f_rule_table(ViolationScope::AnyWindowIn5x5), clean) == clean);
}

TEST_CASE("rule serialization round-trips and matches the golden file") {
  auto rule = f_rule_table();
  CHECK(rule->guards().size() == 23);  // 17 source rules, two expanded 4-fold

  const std::string text = serialize_rules(*rule);
  const std::string golden = read_file(std::string(OBSCA_SOURCE_DIR) + "/data/f.rules");
  CHECK(text == golden);

  auto parsed = parse_rules(text);
  REQUIRE(parsed.ok());
  CHECK(serialize_rules(*parsed.value()) == text);

  // Parsed and builtin tables implement the same map (sampled windows).
  Rng rng(0x9dc3);
  std::vector<State> w(25);
  for (int trial = 0; trial < 4000; ++trial) {
    for (auto& s : w) s = static_cast<State>(rng.below(fstate::Count));
    CHECK(parsed.value()->apply(w.data()) == rule->apply(w.data()));
  }
}

TEST_CASE("rule parse errors carry line information") {
  CHECK(!parse_rules("not a rules file").ok());
  auto r = parse_rules("ca-rules v1\nname: x\norigin: y\nradius: 3\n");
  REQUIRE(!r.ok());
  CHECK(r.error().message.find("radius") != std::string::npos);
}

TEST_CASE("particle census flags ill-formed halves") {
  Configuration x = f_configuration();
  put_pair(x, {0, 0});
  x.set({5, 5}, fstate::U);  // orphan upper half
  const auto ps = particles(x);
  REQUIRE(ps.size() == 3);
  CHECK(ps[0].at == Position{0, 0});
  CHECK(ps[0].well_formed);
  CHECK(ps[1].at == Position{0, 1});
  CHECK(ps[1].well_formed);
  CHECK(ps[2].at == Position{5, 5});
  CHECK(!ps[2].well_formed);
}
