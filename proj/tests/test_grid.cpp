#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "obsca/fdef.hpp"
#include "obsca/grid.hpp"
#include "obsca/util.hpp"

using namespace obsca;

namespace {

Configuration random_config(Rng& rng, int radius, int fill) {
  Configuration x = f_configuration();
  const State pool[4] = {fstate::Zero, fstate::One, fstate::U, fstate::D};
  for (int i = 0; i < fill; ++i) {
    Position p{static_cast<std::int32_t>(rng.range(-radius, radius)),
               static_cast<std::int32_t>(rng.range(-radius, radius))};
    x.set(p, pool[rng.below(4)]);
  }
  return x;
}

}  // namespace

TEST_CASE("dyadic ordering and formatting") {
  Dyadic zero = Dyadic::zero_value();
  Dyadic one = Dyadic::pow2(0);
  Dyadic eighth = Dyadic::pow2(-3);
  CHECK(zero < eighth);
  CHECK(eighth < one);
  CHECK(zero < one);
  CHECK(!(one < one));
  CHECK(zero.to_string() == "0");
  CHECK(eighth.to_string() == "2^-3");
  CHECK(one.approx() == doctest::Approx(1.0));
  CHECK(eighth.approx() == doctest::Approx(0.125));
}

TEST_CASE("distance identity and point evaluations") {
  Configuration x = f_configuration();
  CHECK(cantor_distance(x, x).is_zero());

  Configuration y = x;
  y.set({0, 0}, fstate::One);
  CHECK(cantor_distance(x, y) == Dyadic::pow2(0));

  Configuration z = x;
  z.set({3, -2}, fstate::U);
  CHECK(cantor_distance(x, z) == Dyadic::pow2(-3));

  // Nearest disagreement wins.
  Configuration w = x;
  w.set({5, 5}, fstate::One);
  w.set({-1, 0}, fstate::D);
  CHECK(cantor_distance(x, w) == Dyadic::pow2(-1));
}

TEST_CASE("distance axioms on sampled triples") {
  Rng rng(0x5eed0001);
  for (int trial = 0; trial < 200; ++trial) {
    Configuration a = random_config(rng, 6, 5);
    Configuration b = random_config(rng, 6, 5);
    Configuration c = random_config(rng, 6, 5);
    Dyadic ab = cantor_distance(a, b);
    Dyadic ba = cantor_distance(b, a);
    CHECK(ab == ba);
    CHECK(cantor_distance(a, a).is_zero());
    if (ab.is_zero()) CHECK(a == b);
    // Ultrametric: d(a,c) <= max(d(a,b), d(b,c)).
    Dyadic ac = cantor_distance(a, c);
    Dyadic bc = cantor_distance(b, c);
    Dyadic bound = (ab < bc) ? bc : ab;
    CHECK(!(bound < ac));
  }
}

TEST_CASE("distance requires a shared alphabet") {
  Configuration x = f_configuration();
  auto other = std::make_shared<Alphabet>("binary");
  other->add_state("0", '.');
  other->add_state("1", '1');
  Configuration y(other, 0);
  CHECK_THROWS(cantor_distance(x, y));
}

TEST_CASE("shift identity, composition, and pointwise law") {
  Configuration x = f_configuration();
  x.set({0, 0}, fstate::U);
  x.set({4, -1}, fstate::One);

  CHECK(shift(x, {0, 0}) == x);
  CHECK(shift(shift(x, {1, 0}), {-1, 0}) == x);

  Configuration s = shift(x, {2, 3});
  CHECK(s.get({-2, -3}) == fstate::U);
  CHECK(s.get({2, -4}) == fstate::One);
  CHECK(s.support().size() == x.support().size());
  // (sigma^m x)(z) = x(z + m) spot check.
  for (auto& [p, st] : x.support()) {
    CHECK(s.get({p.x - 2, p.y - 3}) == st);
  }
}

TEST_CASE("shift lower-bounds the shifted distance") {
  Configuration x = f_configuration();
  Configuration y = x;
  y.set({0, 0}, fstate::One);
  REQUIRE(cantor_distance(x, y) == Dyadic::pow2(0));
  for (Position m : {Position{3, 0}, Position{-2, 2}, Position{0, -5}}) {
    Dyadic d = cantor_distance(shift(x, m), shift(y, m));
    Dyadic bound = Dyadic::pow2(-m.norm());
    CHECK(!(d < bound));
  }
}

TEST_CASE("extract windows with lower-left origin and top-first rows") {
  Configuration x = f_configuration();
  Pattern blank = extract(x, {7, -9}, 3, 3);
  for (const auto& c : blank.cells) {
    CHECK(c.wildcard == false);
    CHECK(c.state == fstate::Zero);
  }

  x.set({1, 2}, fstate::D);
  Pattern p = extract(x, {0, 0}, 3, 3);
  // Row 0 is the top row (y = 2), so (1,2) lands at row 0, column 1.
  CHECK(p.at(0, 1).state == fstate::D);
  CHECK(p.at(1, 1).state == fstate::Zero);

  // Top-left footprint corner of an obstacle: r v over > 1.
  Configuration ob = f_configuration();
  paint_obstacle(ob, {0, 0}, 3, 2);  // footprint (-1,-1)..(3,2)
  Pattern corner = extract(ob, {-1, 1}, 2, 2);
  CHECK(corner.at(0, 0).state == fstate::TopLeft);
  CHECK(corner.at(0, 1).state == fstate::TopEdge);
  CHECK(corner.at(1, 0).state == fstate::LeftEdge);
  CHECK(corner.at(1, 1).state == fstate::One);
}

TEST_CASE("extracted windows match themselves") {
  Rng rng(0x5eed0002);
  const Alphabet& alphabet = *f_alphabet();
  for (int trial = 0; trial < 50; ++trial) {
    Configuration x = random_config(rng, 5, 8);
    Position origin{static_cast<std::int32_t>(rng.range(-6, 4)),
                    static_cast<std::int32_t>(rng.range(-6, 4))};
    Pattern p = extract(x, origin, 3, 3);
    CHECK(pattern_matches(p, p, alphabet));
  }
}

TEST_CASE("wildcard pattern matching is class membership") {
  const Alphabet& alphabet = *f_alphabet();
  Pattern p;
  p.width = p.height = 1;
  p.cells.push_back(PatternCell::of_class(kFreeClass));

  Pattern q1;
  q1.width = q1.height = 1;
  q1.cells.push_back(PatternCell::concrete(fstate::One));
  CHECK(!pattern_matches(p, q1, alphabet));

  Pattern qd = q1;
  qd.cells[0] = PatternCell::concrete(fstate::D);
  CHECK(pattern_matches(p, qd, alphabet));

  Pattern wide;
  wide.width = 2;
  wide.height = 1;
  wide.cells.push_back(PatternCell::concrete(fstate::Zero));
  wide.cells.push_back(PatternCell::concrete(fstate::Zero));
  CHECK_THROWS(pattern_matches(p, wide, alphabet));
}

TEST_CASE("configurations keep a canonical support") {
  Configuration x = f_configuration();
  x.set({2, 2}, fstate::One);
  x.set({2, 2}, fstate::Zero);  // writing background erases the entry
  CHECK(x.support().empty());
  CHECK(x == f_configuration());

  x.set({1, 1}, fstate::U);
  Position lo, hi;
  CHECK(x.bounds(lo, hi));
  CHECK(lo == Position{1, 1});
  CHECK(hi == Position{1, 1});
}
