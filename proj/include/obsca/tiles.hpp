#pragma once
// Wang-style domino tile sets: a finite set of named tiles plus the sets of
// allowed horizontal (left,right) and vertical (bottom,top) adjacent pairs.
// Bounded square/rectangle tiling is decided by exhaustive backtracking; the
// obstacle compilers use these sets as obstacle-interior material.

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "obsca/util.hpp"

namespace obsca {

struct TileSet {
  std::vector<std::string> names;  // index = tile id

  // Allowed adjacent pairs, packed with pack(). h_ok: (left, right).
  // v_ok: (bottom, top). A pair absent from the set is forbidden.
  std::unordered_set<std::uint32_t> h_ok;
  std::unordered_set<std::uint32_t> v_ok;

  static std::uint32_t pack(int a, int b) {
    return (static_cast<std::uint32_t>(a) << 16) | static_cast<std::uint32_t>(b);
  }

  int size() const { return static_cast<int>(names.size()); }
  int find(const std::string& name) const;  // tile id, or -1
};

// A tiling decision. When tilable, `cells` holds tile ids row-major with row
// 0 at the BOTTOM: cells[r * width + c] is the tile at column c of row r.
struct Tiling {
  bool tilable = false;
  int width = 0;
  int height = 0;
  std::vector<int> cells;
};

// Exhaustive backtracking over the w x h rectangle with free boundary.
// Deterministic: cells are filled bottom row first, left to right, trying
// tiles in id order, so a returned witness is the lexicographically least
// one in that scan order. tiles_square(t, n) == tiles_rect(t, n, n).
Tiling tiles_rect(const TileSet& t, int w, int h);
Tiling tiles_square(const TileSet& t, int n);  // requires n >= 1

// True when `g` is a complete assignment satisfying t's constraints.
bool tiling_valid(const TileSet& t, const Tiling& g);

// Text format ("tiles v1"):
//   tiles v1
//   tiles: c1 c2 c3
//   h: c1 c2
//   v: c1 c1
// 'tiles:' lines append names in id order; 'h:'/'v:' lines allow one pair
// each and must reference declared names. '#' comments, blank lines ignored.
std::string serialize_tiles(const TileSet& t);
Result<TileSet> parse_tiles(const std::string& text);

}  // namespace obsca
