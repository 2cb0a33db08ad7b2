#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "obsca/analysis.hpp"
#include "obsca/engine.hpp"
#include "obsca/fdef.hpp"
#include "obsca/grid.hpp"
#include "obsca/reduce.hpp"
#include "obsca/router.hpp"
#include "obsca/rules.hpp"
#include "obsca/sft.hpp"
#include "obsca/tiles.hpp"
#include "obsca/tm.hpp"
#include "obsca/util.hpp"

using namespace obsca;

namespace {

std::string read_file(const std::string& rel) {
  std::ifstream in(std::string(OBSCA_SOURCE_DIR) + "/" + rel, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TuringMachine load_tm(const std::string& rel) {
  Result<TuringMachine> r = parse_tm(read_file(rel));
  REQUIRE(r.ok());
  return std::move(r).take();
}

CompiledCA compile2(const std::string& rel) {
  Result<CompiledCA> r = phi2(load_tm(rel));
  REQUIRE(r.ok());
  return std::move(r).take();
}

// Random well-spaced obstacle noise: a field of valid obstacles plus junk.
Configuration af_noise(Rng& rng) {
  Configuration x = f_configuration();
  const int cells = 10 + static_cast<int>(rng.below(60));
  for (int i = 0; i < cells; ++i)
    x.set({static_cast<int>(rng.range(-12, 12)), static_cast<int>(rng.range(-12, 12))},
          static_cast<State>(rng.below(fstate::Count)));
  return x;
}

}  // namespace

TEST_CASE("witness: a centered obstacle sized to the tolerance") {
  // The formula's footprint side is 2k; k = 1 falls below the minimal legal
  // footprint 3 and is clamped up.
  bool clamped = false;
  Configuration c1 = nonsensitivity_witness(Dyadic::pow2(-1), &clamped);
  CHECK(clamped);
  Position lo{}, hi{};
  REQUIRE(c1.bounds(lo, hi));
  CHECK(lo == Position{-1, -1});
  CHECK(hi == Position{1, 1});

  Configuration c3 = nonsensitivity_witness(Dyadic::pow2(-3), &clamped);
  CHECK(!clamped);
  REQUIRE(c3.bounds(lo, hi));
  CHECK(hi.x - lo.x + 1 == 6);  // side 2k
  CHECK(hi.y - lo.y + 1 == 6);
  CHECK(lo == Position{-3, -3});

  for (int k = 1; k <= 5; ++k) {
    Configuration c = nonsensitivity_witness(Dyadic::pow2(-k));
    Result<std::vector<Position>> v = violations(c, sigma_af());
    REQUIRE(v.ok());
    CHECK(v.value().empty());
    // The witness is inert: the obstacle is a fixed point of the rule.
    CHECK(run(*f_rule_table(), c, 5) == c);
  }

  CHECK_THROWS_AS(nonsensitivity_witness(Dyadic::zero_value()), std::invalid_argument);
  CHECK_THROWS_AS(nonsensitivity_witness(Dyadic::pow2(0)), std::invalid_argument);
}

TEST_CASE("witness checks: the obstacle shields its surroundings") {
  // Distant perturbations, junk and live particles alike, never move the
  // orbit farther than eps from the reference.
  for (int k = 1; k <= 5; ++k) {
    const Dyadic eps = Dyadic::pow2(-k);
    const Configuration c = nonsensitivity_witness(eps);
    const WitnessReport rep = check_nonsensitivity(c, eps, 60, 40, 1000 + k, 4);
    CHECK(rep.pass);
    CHECK(rep.worst <= eps);
    CHECK(rep.fail_sample == -1);
    CHECK(!rep.counterexample.has_value());
    CHECK(rep.kind == "nonsensitivity");
  }
}

TEST_CASE("witness checks: without the obstacle a particle reaches the center") {
  // On the empty configuration the same tolerance fails: some sampled
  // particle pair rides its row into the observation ball.
  const Configuration c = f_configuration();
  const WitnessReport rep = check_nonsensitivity(c, Dyadic::pow2(-1), 30, 40, 1, 4);
  CHECK(!rep.pass);
  CHECK(rep.fail_sample == 16);
  CHECK(rep.fail_time == 11);
  CHECK(rep.worst == Dyadic::pow2(0));
  REQUIRE(rep.counterexample.has_value());
  // The report is reproducible from (seed, parameters) alone, whatever the
  // thread count.
  const WitnessReport r1 = check_nonsensitivity(c, Dyadic::pow2(-1), 30, 40, 1, 1);
  const WitnessReport r8 = check_nonsensitivity(c, Dyadic::pow2(-1), 30, 40, 1, 8);
  CHECK(r1.fail_sample == rep.fail_sample);
  CHECK(r8.fail_sample == rep.fail_sample);
  CHECK(r1.fail_time == rep.fail_time);
  CHECK(r8.fail_time == rep.fail_time);
  CHECK(r1.worst == rep.worst);
  CHECK(r8.worst == rep.worst);
  CHECK(*r1.counterexample == *rep.counterexample);
  CHECK(*r8.counterexample == *rep.counterexample);
}

TEST_CASE("attraction: settled fields settle at time zero") {
  Configuration x = f_configuration();
  paint_obstacle(x, {0, 0}, 4, 2);
  paint_obstacle(x, {10, 5}, 1, 1);
  const Attraction a = attract_to_sft(x);
  REQUIRE(a.attracted);
  CHECK(a.t0 == 0);
  CHECK(*a.settled == x);
}

TEST_CASE("attraction: broken material erodes and junk dies") {
  // Knocking out a footprint corner dooms the whole obstacle.
  Configuration x = f_configuration();
  paint_obstacle(x, {0, 0}, 3, 3);
  x.set({-1, 3}, fstate::Zero);
  const Attraction a = attract_to_sft(x);
  REQUIRE(a.attracted);
  CHECK(a.t0 > 0);
  CHECK(a.settled->support().empty());

  // A valid obstacle plus scattered junk: the obstacle stays, junk goes.
  Configuration y = f_configuration();
  paint_obstacle(y, {0, 0}, 3, 3);
  y.set({9, 2}, fstate::U);
  y.set({11, -4}, fstate::One);
  y.set({-7, 1}, fstate::TopEdge);
  const Attraction b = attract_to_sft(y);
  REQUIRE(b.attracted);
  Configuration expect = f_configuration();
  paint_obstacle(expect, {0, 0}, 3, 3);
  CHECK(*b.settled == expect);
  Result<std::vector<Obstacle>> obs = decompose_obstacles(*b.settled);
  REQUIRE(obs.ok());
  CHECK(obs.value().size() == 1);
}

TEST_CASE("attraction: a particle is settled once it flies west of the field") {
  Configuration x = f_configuration();
  paint_obstacle(x, {0, 0}, 2, 2);
  Result<Configuration> with = place_particle(x, {9, 1});
  REQUIRE(with.ok());
  const Attraction a = attract_to_sft(std::move(with).take());
  REQUIRE(a.attracted);
  CHECK(a.t0 > 0);
  // The settled field still carries the pair, strictly west of the obstacle.
  int us = 0;
  Position u{};
  for (const auto& [p, s] : a.settled->support())
    if (s == fstate::U) {
      ++us;
      u = p;
    }
  CHECK(us == 1);
  CHECK(u.x < -1);
  CHECK(a.settled->get({u.x, u.y - 1}) == fstate::D);
  // Settling is stable: once clean, violations never reappear.
  Configuration z = *a.settled;
  for (int t = 0; t < 30; ++t) {
    z = step(*f_rule_table(), z);
    Result<std::vector<Position>> v = violations(z, sigma_af());
    REQUIRE(v.ok());
    CHECK(v.value().empty());
  }
}

TEST_CASE("attraction: random noise settles within the default budget") {
  Rng rng(42);
  for (int i = 0; i < 25; ++i) {
    const Configuration x = af_noise(rng);
    const Attraction a = attract_to_sft(x, -1, 2);
    REQUIRE(a.attracted);
    CHECK(a.t0 <= a.t_max);
    Result<std::vector<Position>> v = violations(*a.settled, sigma_af());
    REQUIRE(v.ok());
    CHECK(v.value().empty());
    // Whatever obstacle material survived decomposes into rectangles.
    Result<std::vector<Obstacle>> obs = decompose_obstacles(*a.settled);
    CHECK(obs.ok());
  }
}

TEST_CASE("attraction: an exhausted budget reports the offending cells") {
  Configuration x = f_configuration();
  paint_obstacle(x, {0, 0}, 3, 3);
  x.set({-1, 3}, fstate::Zero);
  const Attraction a = attract_to_sft(x, 0);
  CHECK(!a.attracted);
  CHECK(a.t_max == 0);
  CHECK(!a.residual.empty());
  CHECK(!a.settled.has_value());
}

TEST_CASE("equicontinuity violation: the empty configuration") {
  // The spec of the construction: truncate, settle, route, place, separate.
  const Configuration x = f_configuration();
  Result<EqViolation> r = equicontinuity_violation(x, {0, 0}, Dyadic::pow2(-5), 64, 2);
  REQUIRE(r.ok());
  const EqViolation& e = r.value();
  CHECK(e.n >= 6);  // n must exceed -log delta
  CHECK(e.t0 == 0);
  CHECK(e.zn == Position{e.n, 0});  // a straight escape path east
  CHECK(e.bound == Dyadic::pow2(-1));
  CHECK(e.bound < e.measured);
  // Certificate recomputed from scratch.
  const Configuration a = run(*f_rule_table(), e.y, e.n);
  const Configuration b = run(*f_rule_table(), e.y2, e.n);
  CHECK(a.get(e.z0) != b.get(e.z0));
  CHECK(cantor_distance(a, b) == e.measured);
  // Both starts stay within delta of x.
  CHECK(cantor_distance(x, e.y) <= e.delta);
  CHECK(cantor_distance(x, e.y2) <= e.delta);
}

TEST_CASE("equicontinuity violation: the uniform all-1 configuration") {
  // Truncation cuts the material, erosion frees the observation cell, and
  // the particle arrives over the emptied ground.
  const Configuration x(f_alphabet(), fstate::One);
  Result<EqViolation> r = equicontinuity_violation(x, {0, 0}, Dyadic::pow2(-4), 64, 2);
  REQUIRE(r.ok());
  const EqViolation& e = r.value();
  CHECK(e.t0 > 0);  // the solid block needed erosion first
  CHECK(e.n > 4);
  CHECK(e.bound < e.measured);
  CHECK(e.y.background() == fstate::Zero);
  const Configuration a = run(*f_rule_table(), e.y, e.n);
  const Configuration b = run(*f_rule_table(), e.y2, e.n);
  CHECK(a.get(e.z0) != b.get(e.z0));
}

TEST_CASE("equicontinuity violation: random obstacle fields") {
  Rng rng(7);
  for (int i = 0; i < 5; ++i) {
    const RouteField field = random_route_field(rng, 6);
    Result<EqViolation> r = equicontinuity_violation(field.x, field.z0, Dyadic::pow2(-4), 96, 2);
    REQUIRE(r.ok());
    const EqViolation& e = r.value();
    CHECK(e.bound == Dyadic::pow2(-(field.z0.norm() + 1)));
    CHECK(e.bound < e.measured);
    const Configuration a = run(*f_rule_table(), e.y, e.n);
    const Configuration b = run(*f_rule_table(), e.y2, e.n);
    CHECK(a.get(e.z0) != b.get(e.z0));
    CHECK(cantor_distance(field.x, e.y) <= e.delta);
    CHECK(cantor_distance(field.x, e.y2) <= e.delta);
  }
}

TEST_CASE("equicontinuity violation: refusals are explicit") {
  // Horizon too small for the required separation time.
  const Configuration x = f_configuration();
  Result<EqViolation> r = equicontinuity_violation(x, {0, 0}, Dyadic::pow2(-5), 3, 1);
  REQUIRE(!r.ok());
  CHECK(r.error().describe().find("horizon") != std::string::npos);

  // z0 deep inside obstacle material that survives truncation.
  Configuration y = f_configuration();
  paint_obstacle(y, {0, 0}, 2, 2);
  Result<EqViolation> rz = equicontinuity_violation(y, {0, 0}, Dyadic::pow2(-6), 32, 1);
  REQUIRE(!rz.ok());
  CHECK(rz.error().describe().find("obstacle material") != std::string::npos);

  // An occupied z0 is only handled for particle-free configurations.
  Configuration p = f_configuration();
  paint_obstacle(p, {0, 0}, 2, 2);
  Result<Configuration> with = place_particle(p, {9, 1});
  REQUIRE(with.ok());
  Result<EqViolation> rp =
      equicontinuity_violation(with.value(), {0, 2}, Dyadic::pow2(-4), 32, 1);
  REQUIRE(!rp.ok());
  CHECK(rp.error().describe().find("particles") != std::string::npos);

  CHECK(!equicontinuity_violation(x, {0, 0}, Dyadic::pow2(0), 32, 1).ok());
  CHECK(!equicontinuity_violation(x, {0, 0}, Dyadic::zero_value(), 32, 1).ok());
}

TEST_CASE("sensitivity constant: formula and measurements") {
  CHECK(sensitivity_value_for(6) == Dyadic::pow2(-2));
  CHECK(sensitivity_value_for(1) == Dyadic::pow2(0));
  CHECK(sensitivity_value_for(2) == Dyadic::pow2(0));
  CHECK(sensitivity_value_for(3) == Dyadic::pow2(-1));
  CHECK_THROWS_AS(sensitivity_value_for(0), std::invalid_argument);
  // Monotone non-increasing in l.
  for (int l = 1; l < 24; ++l) CHECK(sensitivity_value_for(l + 1) <= sensitivity_value_for(l));

  // The plain automaton admits obstacles of every size: no constant.
  const SensitivityConstant plain = sensitivity_constant(plain_f(), 6);
  CHECK(plain.unbounded);
  CHECK(plain.search.unbounded_up_to_bound());

  // A halting machine bounds its obstacles; the constant follows the formula.
  const CompiledCA ca = compile2("data/tm/zigzag.tm");
  const SensitivityConstant s = sensitivity_constant(ca, 10);
  CHECK(!s.unbounded);
  CHECK(s.search.any);
  CHECK(s.l == std::min(s.search.max_h, s.search.max_w));
  CHECK(s.l == 5);  // heights count the five steps to the halt
  CHECK(s.value == sensitivity_value_for(5));
  CHECK(s.value == Dyadic::pow2(-2));
}

TEST_CASE("classification evidence: the three flavors") {
  // Plain automaton: obstacles at every size, nothing equicontinuity-like.
  const ClassEvidence n = classify_evidence(plain_f(), 8, 6, 1);
  CHECK(n.class_hint == "N-like");
  CHECK(n.caveat == kClassificationCaveat);
  CHECK(!n.basis.empty());
  CHECK(n.search.unbounded_up_to_bound());

  // Halting machine: bounded obstacles, sensitive-like.
  const ClassEvidence s = classify_evidence(compile2("data/tm/zigzag.tm"), 8, 10, 1);
  CHECK(s.class_hint == "S-like");
  CHECK(s.caveat == kClassificationCaveat);
  CHECK(s.basis.find("2^-2") != std::string::npos);

  // Looping machine: unbounded obstacles.
  Result<CompiledCA> loop = phi2(load_tm("data/tm/pingpong.tm"));
  REQUIRE(loop.ok());
  const ClassEvidence n2 = classify_evidence(loop.value(), 8, 8, 1);
  CHECK(n2.class_hint == "N-like");
  CHECK(n2.caveat == kClassificationCaveat);

  // The halting variant admits padding above the halt: unbounded again.
  Result<CompiledCA> halt = phi3(load_tm("data/tm/zigzag.tm"));
  REQUIRE(halt.ok());
  const ClassEvidence n3 = classify_evidence(halt.value(), 8, 8, 1);
  CHECK(n3.class_hint == "N-like");

  // A single free tile paves arbitrarily large stable blocks.
  TileSet one;
  one.names = {"a"};
  one.h_ok = {TileSet::pack(0, 0)};
  one.v_ok = {TileSet::pack(0, 0)};
  Result<CompiledCA> blocks = phi4(one);
  REQUIRE(blocks.ok());
  const ClassEvidence eq = classify_evidence(blocks.value(), 6, 8, 1);
  CHECK(eq.class_hint == "Eq-like");
  CHECK(eq.caveat == kClassificationCaveat);
  CHECK(eq.basis.find("fixed point") != std::string::npos);

  // A chain tile set caps its blocks at width 4: structured material is
  // bounded, but plain obstacles persist, so it is still never sensitive.
  Result<TileSet> chain = parse_tiles(read_file("data/tiles/chain.tiles"));
  REQUIRE(chain.ok());
  Result<CompiledCA> capped = phi4(std::move(chain).take());
  REQUIRE(capped.ok());
  const ClassEvidence n4 = classify_evidence(capped.value(), 6, 8, 1);
  CHECK(n4.class_hint == "N-like");
  CHECK(n4.basis.find("plain obstacles persist") != std::string::npos);
}
