#pragma once
// The concrete 12-state alphabet of the obstacle/particle automaton F and the
// canonical obstacle footprint built from it.
//
// Display glyphs (also used in grid files) — border glyphs point inward:
//   .  background                  1  obstacle interior
//   U  particle upper half        D  particle lower half
//   v  top edge     ^  bottom edge     >  left edge     <  right edge
//   r  top-left corner   7  top-right   L  bottom-left   J  bottom-right
//
// An obstacle with interior w x h occupies a (w+2) x (h+2) footprint:
//   r v ... v 7
//   > 1 ... 1 <
//   L ^ ... ^ J

#include "obsca/grid.hpp"

namespace obsca {

namespace fstate {
inline constexpr State Zero = 0;
inline constexpr State One = 1;
inline constexpr State U = 2;
inline constexpr State D = 3;
inline constexpr State TopEdge = 4;      // v
inline constexpr State BottomEdge = 5;   // ^
inline constexpr State RightEdge = 6;    // <
inline constexpr State LeftEdge = 7;     // >
inline constexpr State TopLeft = 8;      // r
inline constexpr State TopRight = 9;     // 7
inline constexpr State BottomLeft = 10;  // L
inline constexpr State BottomRight = 11; // J
inline constexpr int Count = 12;
}  // namespace fstate

// Class names on the F alphabet:
//   "obstacle" = {1, v, ^, <, >, r, 7, L, J}  (the framed-block states)
//   "free"     = {., U, D}                    (states a window wildcard spans)
//   "particle" = {U, D}
inline constexpr const char* kObstacleClass = "obstacle";
inline constexpr const char* kFreeClass = "free";
inline constexpr const char* kParticleClass = "particle";

// The shared F alphabet (12 states, classes above). Cached singleton.
AlphabetPtr f_alphabet();

// Extends the F alphabet with extra states (same first 12 ids). Used by the
// compilers; `extra` supplies (name, display) pairs appended in order. The
// extra states join the obstacle class; when `extra_class` is nonempty they
// also form a class of their own under that name (obstacle decomposition
// recognizes interiors made of class-"tile" states).
AlphabetPtr extend_f_alphabet(const std::string& name,
                              const std::vector<std::pair<std::string, char>>& extra,
                              const std::string& extra_class = "");

// State of the obstacle footprint at offset (dx, dy) from the footprint's
// lower-left corner, for footprint dimensions W x H (throws if outside).
State obstacle_footprint_state(int dx, int dy, int W, int H);

// Paints a plain obstacle (interior all 1s) with the given interior origin and
// size into x. Does not check for collisions with existing support.
void paint_obstacle(Configuration& x, Position interior_origin, int w, int h);

// An empty configuration over the F alphabet.
Configuration f_configuration();

}  // namespace obsca
