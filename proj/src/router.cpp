#include "obsca/router.hpp"

#include <algorithm>

#include "obsca/fdef.hpp"
#include "obsca/rules.hpp"

namespace obsca {

namespace {

struct Box {
  Position lo, hi;  // footprint corners, inclusive
  bool contains(Position p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
  int cheb_to(Position p) const {
    const int dx = p.x < lo.x ? lo.x - p.x : (p.x > hi.x ? p.x - hi.x : 0);
    const int dy = p.y < lo.y ? lo.y - p.y : (p.y > hi.y ? p.y - hi.y : 0);
    return dx > dy ? dx : dy;
  }
};

const Box* box_at(const std::vector<Box>& boxes, Position p) {
  for (const Box& b : boxes)
    if (b.contains(p)) return &b;
  return nullptr;
}

}  // namespace

Result<Path> build_path(const Configuration& x, Position z0, int length) {
  if (length < 1) return Error{"build_path: length must be at least 1"};
  for (const auto& [p, s] : x.support())
    if (s == fstate::U || s == fstate::D)
      return Error::at("build_path: configuration contains a particle", p.x, p.y);
  {
    auto viols = violations(x, f_rule_table()->case1_library());
    if (!viols.ok()) return viols.error();
    if (!viols.value().empty()) {
      const Position p = viols.value().front();
      return Error::at("build_path: configuration has admissibility violations",
                       p.x, p.y);
    }
  }
  if (x.get(z0) != fstate::Zero)
    return Error::at("build_path: start cell is occupied", z0.x, z0.y);

  auto obstacles = decompose_obstacles(x);
  if (!obstacles.ok()) return obstacles.error();
  std::vector<Box> boxes;
  for (const Obstacle& ob : obstacles.value())
    boxes.push_back({ob.footprint_lo(), ob.footprint_hi()});

  for (const Box& b : boxes)
    if (b.lo.x > z0.x && b.cheb_to(z0) <= 2)
      return Error::at(
          "build_path: an obstacle east of the start is within distance 2",
          b.lo.x, b.lo.y);

  const bool below_free = x.get({z0.x, z0.y - 1}) == fstate::Zero;
  const bool above_free = x.get({z0.x, z0.y + 1}) == fstate::Zero;
  if (!below_free && !above_free)
    return Error::at("build_path: both vertical neighbors of the start are occupied",
                     z0.x, z0.y);

  Path path;
  path.case_tag = below_free ? "below-free" : "above-free";
  path.points.push_back(z0);
  path.anchors.push_back(0);

  while (static_cast<int>(path.points.size()) < length) {
    const Position z = path.points.back();
    const Position d1{z.x + 1, z.y};
    const Position d2{z.x + 1, below_free ? z.y - 1 : z.y + 1};
    const Box* hit = box_at(boxes, d1);
    if (hit == nullptr) hit = box_at(boxes, d2);
    if (hit == nullptr) {
      path.points.push_back(d1);
      path.anchors.push_back(static_cast<int>(path.points.size()) - 1);
      continue;
    }
    const int cl = hit->lo.x, cr = hit->hi.x;
    const int ybot = hit->lo.y, ytop = hit->hi.y;
    const int H = ytop - ybot + 1;
    if (z.x != cl - 1)
      return Error::at("build_path: detour does not start in the west lane", z.x,
                       z.y);
    if (below_free) {
      const int run_up = (ytop + 1) - z.y;
      if (run_up < 0 || run_up > H)
        return Error::at("build_path: lane row outside the obstacle span", z.x, z.y);
      for (int y = z.y + 1; y <= ytop + 1; ++y) path.points.push_back({cl - 1, y});
      for (int px = cl; px <= cr + 1; ++px) path.points.push_back({px, ytop + 1});
      const int run_dn = H - run_up;
      for (int k = 1; k <= run_dn; ++k) path.points.push_back({cr + 1, ytop + 1 - k});
    } else {
      const int run_dn = z.y - (ybot - 1);
      if (run_dn < 0 || run_dn > H)
        return Error::at("build_path: lane row outside the obstacle span", z.x, z.y);
      for (int y = z.y - 1; y >= ybot - 1; --y) path.points.push_back({cl - 1, y});
      for (int px = cl; px <= cr + 1; ++px) path.points.push_back({px, ybot - 1});
      const int run_up = H - run_dn;
      for (int k = 1; k <= run_up; ++k) path.points.push_back({cr + 1, ybot - 1 + k});
    }
    path.anchors.push_back(static_cast<int>(path.points.size()) - 1);
  }
  return path;
}

Result<Configuration> place_particle(const Configuration& x, Position z) {
  const Position below{z.x, z.y - 1};
  if (x.get(z) != fstate::Zero)
    return Error::at("place_particle: target cell is occupied", z.x, z.y);
  if (x.get(below) != fstate::Zero)
    return Error::at("place_particle: cell below the target is occupied", below.x,
                     below.y);
  Configuration out = x;
  out.set(z, fstate::U);
  out.set(below, fstate::D);
  return out;
}

Arrival arrival_status(const Configuration& x, const Path& path, int n,
                       int threads) {
  const Position zn = path.points.at(n);
  const Position u_cell =
      path.case_tag == "below-free" ? zn : Position{zn.x, zn.y + 1};
  auto placed = place_particle(x, u_cell);
  if (!placed.ok()) return Arrival::Illegal;
  const Configuration end =
      run(*f_rule_table(), std::move(placed).take(), n, threads);
  const State s = end.get(path.points.front());
  return (s == fstate::U || s == fstate::D) ? Arrival::Pass : Arrival::Fail;
}

bool verify_arrival(const Configuration& x, const Path& path, int n, int threads) {
  return arrival_status(x, path, n, threads) == Arrival::Pass;
}

int calibrate_n0(const Configuration& x, const Path& path, int threads) {
  int last_bad = -1;
  for (int n = 0; n < static_cast<int>(path.points.size()); ++n)
    if (arrival_status(x, path, n, threads) != Arrival::Pass) last_bad = n;
  return last_bad + 1;
}

RouteField random_route_field(Rng& rng, int max_obstacles) {
  RouteField field;
  field.x = f_configuration();
  field.z0 = {30, static_cast<int>(rng.range(-3, 3))};
  // Footprint boxes (lower-left corner and interior size), pairwise with an
  // axis gap of at least 4 so detour lanes never interact.
  std::vector<std::array<int, 4>> obs;
  int tries = 0;
  while (static_cast<int>(obs.size()) < max_obstacles && tries < 500) {
    ++tries;
    const int w = static_cast<int>(rng.range(1, 5));
    const int h = static_cast<int>(rng.range(1, 5));
    const int ox = static_cast<int>(rng.range(34, 80));
    const int oy = static_cast<int>(rng.range(-20, 20));
    bool ok = true;
    for (const auto& [ox2, oy2, w2, h2] : obs) {
      const int gap_x = std::max(ox - (ox2 + w2 + 2), ox2 - (ox + w + 2));
      const int gap_y = std::max(oy - (oy2 + h2 + 2), oy2 - (oy + h + 2));
      if (std::max(gap_x, gap_y) < 4) {
        ok = false;
        break;
      }
    }
    if (ok) obs.push_back({ox, oy, w, h});
  }
  for (const auto& [ox, oy, w, h] : obs)
    paint_obstacle(field.x, {ox + 1, oy + 1}, w, h);
  return field;
}

}  // namespace obsca
