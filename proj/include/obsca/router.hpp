#pragma once
// The constructive escape path: from a free cell z0 of an obstacle field,
// build placement positions (z_n) so that a particle placed at z_n reaches
// z0 in exactly n steps, detouring around obstacles over the top (or under
// the bottom in the mirrored case).
//
// Case tags: "below-free" means the cell below z0 is free, the pair sits as
// U at the path point with D trailing below, and detours go over the top.
// "above-free" is the vertical mirror (D at the path point, U above,
// detours under the bottom); it applies when the cell below z0 is blocked
// but the cell above is free.

#include <string>
#include <vector>

#include "obsca/engine.hpp"
#include "obsca/grid.hpp"
#include "obsca/sft.hpp"
#include "obsca/util.hpp"

namespace obsca {

struct Path {
  std::vector<Position> points;  // z_0 ... z_N, consecutive points 4-adjacent
  std::string case_tag;          // "below-free" or "above-free"
  // Derived data: indices whose placements arrive exactly (free steps and
  // detour endpoints), and the calibrated cutoff from which every index
  // arrives (0 until calibrate_n0 ran).
  std::vector<int> anchors;
  int n0 = 0;
};

// Builds a path prefix of at least `length` points. Preconditions: x holds
// only obstacle material (no particles), has no admissibility violations,
// x(z0) = 0, one vertical neighbor of z0 is free, and no obstacle footprint
// east of z0 comes within Chebyshev distance 2 of it.
Result<Path> build_path(const Configuration& x, Position z0, int length);

// x with a particle added: U at z, D just below. Errors when either target
// cell is occupied.
Result<Configuration> place_particle(const Configuration& x, Position z);

enum class Arrival { Pass, Fail, Illegal };

// Places a particle on the pair of cells covering path point n (per the
// path's case tag), runs n steps, and reports whether z_0 then holds a
// particle half. Illegal: the placement cells are not free.
Arrival arrival_status(const Configuration& x, const Path& path, int n,
                       int threads = 1);

// The boolean form of the lemma's claim, meaningful for n >= path.n0.
bool verify_arrival(const Configuration& x, const Path& path, int n,
                    int threads = 1);

// Sweeps every index and returns 1 + the last index whose placement does not
// arrive (0 when all arrive). The path is exact from this index on.
int calibrate_n0(const Configuration& x, const Path& path, int threads = 1);

// A randomized routing scenario: up to max_obstacles obstacles (interiors up
// to 5x5) in a 60x60 window east of the start cell, pairwise axis gaps >= 4,
// and z0 on the west side with its below neighbor free.
struct RouteField {
  Configuration x;
  Position z0;
};
RouteField random_route_field(Rng& rng, int max_obstacles);

}  // namespace obsca
