#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "obsca/engine.hpp"
#include "obsca/fdef.hpp"
#include "obsca/router.hpp"
#include "obsca/rules.hpp"
#include "obsca/util.hpp"

using namespace obsca;

namespace {

void check_four_adjacent(const Path& path) {
  for (std::size_t i = 1; i < path.points.size(); ++i) {
    const Position d = path.points[i] - path.points[i - 1];
    CHECK(std::abs(d.x) + std::abs(d.y) == 1);
  }
}

// Anchors arrive exactly; everything from the calibrated cutoff arrives.
void check_timing(const Configuration& x, Path& path) {
  for (int a : path.anchors) CHECK(arrival_status(x, path, a) == Arrival::Pass);
  path.n0 = calibrate_n0(x, path);
  REQUIRE(path.n0 < static_cast<int>(path.points.size()));
  for (int n = path.n0; n < static_cast<int>(path.points.size()); ++n)
    CHECK(verify_arrival(x, path, n));
}

}  // namespace

TEST_CASE("free space path is the straight east line") {
  Configuration x = f_configuration();
  auto r = build_path(x, {0, 0}, 5);
  REQUIRE(r.ok());
  const Path& path = r.value();
  CHECK(path.case_tag == "below-free");
  const std::vector<Position> expect = {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}};
  CHECK(path.points == expect);
  CHECK(path.anchors.size() == path.points.size());
}

TEST_CASE("detour around a 3x3 footprint costs half-perimeter plus one") {
  Configuration x = f_configuration();
  paint_obstacle(x, {7, 0}, 1, 1);  // footprint (6,-1)..(8,1)
  auto r = build_path(x, {0, 0}, 14);
  REQUIRE(r.ok());
  Path path = std::move(r).take();
  CHECK(path.case_tag == "below-free");
  // Straight to the west lane...
  for (int i = 0; i <= 5; ++i) CHECK(path.points[i] == Position{i, 0});
  // ...then p+1 = 7 detour points over the top...
  const std::vector<Position> detour = {{5, 1}, {5, 2}, {6, 2}, {7, 2},
                                        {8, 2}, {9, 2}, {9, 1}};
  for (int k = 0; k < 7; ++k) CHECK(path.points[6 + k] == detour[k]);
  // ...resuming east on the reflected row.
  CHECK(path.points[13] == Position{10, 1});
  // Anchor indices: all free steps plus the single detour endpoint.
  CHECK(std::find(path.anchors.begin(), path.anchors.end(), 12) != path.anchors.end());
  for (int k = 6; k < 12; ++k)
    CHECK(std::find(path.anchors.begin(), path.anchors.end(), k) == path.anchors.end());
  check_four_adjacent(path);
  check_timing(x, path);
}

TEST_CASE("single-obstacle sweep: anchors exact for every lane offset") {
  for (int w = 1; w <= 4; ++w)
    for (int h = 1; h <= 4; ++h)
      for (int dy = -(h + 3); dy <= h + 3; ++dy) {
        Configuration x = f_configuration();
        paint_obstacle(x, {7, dy + 1}, w, h);  // footprint lo (6, dy)
        auto r = build_path(x, {0, 0}, 30);
        REQUIRE(r.ok());
        Path path = std::move(r).take();
        check_four_adjacent(path);
        for (int a : path.anchors) {
          CHECK(arrival_status(x, path, a) == Arrival::Pass);
        }
        // The tail is never entirely transient.
        const int n0 = calibrate_n0(x, path);
        CHECK(n0 < static_cast<int>(path.points.size()));
      }
}

TEST_CASE("top-lane start uses the above-free mirror") {
  Configuration x = f_configuration();
  paint_obstacle(x, {5, 2}, 3, 2);  // footprint (4,1)..(8,4)
  paint_obstacle(x, {15, 4}, 3, 4); // footprint (14,3)..(18,8)
  const Position z0{6, 5};  // just above the first obstacle's top row
  REQUIRE(x.get({6, 4}) != fstate::Zero);
  REQUIRE(x.get({6, 6}) == fstate::Zero);
  auto r = build_path(x, z0, 30);
  REQUIRE(r.ok());
  Path path = std::move(r).take();
  CHECK(path.case_tag == "above-free");
  check_four_adjacent(path);
  check_timing(x, path);
  // The second obstacle forced a detour: some point lies below its bottom row.
  CHECK(std::any_of(path.points.begin(), path.points.end(),
                    [](Position p) { return p.y == 2 && p.x >= 14; }));
}

TEST_CASE("particle placement and its errors") {
  Configuration x = f_configuration();
  auto placed = place_particle(x, {0, 0});
  REQUIRE(placed.ok());
  CHECK(placed.value().get({0, 0}) == fstate::U);
  CHECK(placed.value().get({0, -1}) == fstate::D);
  CHECK(placed.value().support_size() == 2);
  const auto ps = particles(placed.value());
  REQUIRE(ps.size() == 2);
  CHECK(ps[0].well_formed);
  CHECK(ps[1].well_formed);

  CHECK(!place_particle(placed.value(), {0, 0}).ok());
  Configuration y = f_configuration();
  paint_obstacle(y, {0, 0}, 1, 1);
  auto bad = place_particle(y, {0, 2});  // D cell would land on the top edge
  REQUIRE(!bad.ok());
  CHECK(bad.error().has_position);
}

TEST_CASE("build_path precondition errors") {
  Configuration with_particle = f_configuration();
  with_particle.set({3, 3}, fstate::U);
  CHECK(!build_path(with_particle, {0, 0}, 5).ok());

  Configuration junk = f_configuration();
  junk.set({4, 4}, fstate::One);  // unframed material
  CHECK(!build_path(junk, {0, 0}, 5).ok());

  Configuration x = f_configuration();
  paint_obstacle(x, {4, 0}, 2, 2);  // footprint (3,-1)..(6,2), east of start
  CHECK(!build_path(x, {3, 0}, 5).ok());   // start occupied (west edge column)
  CHECK(!build_path(x, {1, 0}, 5).ok());   // within distance 2 of an east obstacle
  auto far = build_path(x, {0, 10}, 5);    // far away: fine
  CHECK(far.ok());
}

TEST_CASE("randomized fields: exact timing from the calibrated cutoff") {
  Rng rng(42);
  for (int f = 0; f < 12; ++f) {
    const int nobs = 3 + static_cast<int>(rng.below(6));
    RouteField field = random_route_field(rng, nobs);
    REQUIRE(violations(field.x, f_rule_table()->case1_library()).value().empty());
    auto r = build_path(field.x, field.z0, 70);
    REQUIRE(r.ok());
    Path path = std::move(r).take();
    CHECK(path.case_tag == "below-free");
    check_four_adjacent(path);

    for (int a : path.anchors) CHECK(arrival_status(field.x, path, a) == Arrival::Pass);
    path.n0 = calibrate_n0(field.x, path);
    REQUIRE(path.n0 < static_cast<int>(path.points.size()));
    for (int n = path.n0; n < static_cast<int>(path.points.size()); ++n)
      CHECK(verify_arrival(field.x, path, n));

    // Norm growth across anchors.
    for (std::size_t i = 1; i < path.anchors.size(); ++i)
      CHECK(path.points[path.anchors[i]].norm() >
            path.points[path.anchors[i - 1]].norm());
  }
}

TEST_CASE("segment consistency between consecutive anchors") {
  Configuration x = f_configuration();
  paint_obstacle(x, {7, 0}, 2, 3);  // footprint (6,-1)..(9,3)
  auto r = build_path(x, {0, 0}, 25);
  REQUIRE(r.ok());
  const Path& path = r.value();
  for (std::size_t i = 1; i < path.anchors.size(); ++i) {
    const int n = path.anchors[i - 1], m = path.anchors[i];
    auto placed = place_particle(x, path.points[m]);
    REQUIRE(placed.ok());
    const Configuration end = run(*f_rule_table(), std::move(placed).take(), m - n);
    CHECK(end.get(path.points[n]) == fstate::U);
    CHECK(end.get({path.points[n].x, path.points[n].y - 1}) == fstate::D);
  }
}
