#pragma once
// Pattern libraries as local-constraint presentations of admissible windows,
// the generated library of 3x3 obstacle-field windows, violation scanning, and
// obstacle decomposition with rectangle/framing/spacing certification.

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "obsca/fdef.hpp"
#include "obsca/grid.hpp"

namespace obsca {

class PatternLibrary;

// Intensional window admissibility for alphabets whose obstacle interiors are
// too rich to enumerate window-by-window (compiled rule tables). A window is
// judged relative to its CENTER cell: geometry is checked by projecting
// interior states to 1 and testing the base library, and the center's
// adjacency constraints are checked against the pair/positional tables below.
// Empty tables mean "unconstrained".
struct InteriorGrammar {
  std::shared_ptr<const PatternLibrary> base;  // projected-geometry library
  std::vector<State> interior;                 // sorted; states allowed inside the frame
  std::vector<State> banned;                   // sorted; never allowed anywhere
  // Allowed adjacent interior pairs, packed (a << 16) | b.
  // h_ok: a = left cell, b = right cell. v_ok: a = lower cell, b = upper cell.
  std::unordered_set<std::uint32_t> h_ok;
  std::unordered_set<std::uint32_t> v_ok;
  // Positional unary constraints (sorted; empty = unconstrained): which
  // interior states may sit next to each frame edge.
  std::vector<State> left_col, right_col, bottom_row, top_row;
  // Forced state at the interior cell diagonally up-right of the bottom-left
  // frame corner. The state may still appear elsewhere if the pair tables
  // admit it; only this corner cell is pinned.
  std::optional<State> seed;
  // When nonempty: the interior cell diagonally down-left of the top-right
  // frame corner must be in this set (sorted).
  std::vector<State> top_right;
  // Padding relaxation: a vertical pair (below, above) missing from v_ok is
  // still allowed when listed in pad_below AND the cell left of `above` is
  // pad material or the frame's left edge. Locally this says a padded row
  // can only start at its left wall or extend existing padding, so a padded
  // row over non-pad material must run wall-to-wall — impossible across any
  // row that still carries structure the pad may not cover vertically.
  std::vector<State> pad_states;                // sorted
  std::unordered_set<std::uint32_t> pad_below;  // packed (below, above) pairs

  static std::uint32_t pack(State a, State b) {
    return (static_cast<std::uint32_t>(a) << 16) | b;
  }
};

// A window-pattern library: explicit allowed patterns (wildcards permitted),
// optionally replaced by an InteriorGrammar. Membership of a concrete window
// = matches at least one allowed pattern (explicit) or passes the grammar's
// center-relative checks (intensional).
class PatternLibrary {
 public:
  std::string name;
  int window_w = 3;
  int window_h = 3;
  std::vector<Pattern> allowed;
  std::optional<InteriorGrammar> grammar;
  // Fully custom membership test; overrides both explicit patterns and the
  // grammar when set. Used by compiled libraries whose admissibility is not
  // expressible as frame-plus-interior checks.
  std::function<bool(const State*, const Alphabet&)> custom;

  // Builds the projection index used by the fast admit path. Requires every
  // wildcard cell of every allowed pattern to use the same class; states of
  // that class are projected to a sentinel before hashing. Call once after
  // filling `allowed` (no-op for grammar libraries).
  void build_index(const Alphabet& alphabet);

  // Admission of a concrete window (row-major, top row first, size w*h).
  bool admits(const State* cells, const Alphabet& alphabet) const;
  bool admits(const Pattern& window, const Alphabet& alphabet) const;

 private:
  struct ArrayHash {
    std::size_t operator()(const std::array<State, 9>& a) const;
  };
  bool indexed_ = false;
  std::string wildcard_class_;
  std::vector<std::uint8_t> projects_;  // per state: 1 if member of wildcard class
  std::unordered_set<std::array<State, 9>, ArrayHash> index_;

  bool grammar_admits(const State* cells, const Alphabet& alphabet) const;
};

// An axis-aligned rectangular obstacle: interior plus one-cell border frame.
struct Obstacle {
  enum class Kind { Plain, Tm, Tiled };

  Position interior_origin;  // lower-left interior cell
  int interior_w = 1;
  int interior_h = 1;
  Kind kind = Kind::Plain;

  Position footprint_lo() const { return {interior_origin.x - 1, interior_origin.y - 1}; }
  Position footprint_hi() const {
    return {interior_origin.x + interior_w, interior_origin.y + interior_h};
  }
  int footprint_w() const { return interior_w + 2; }
  int footprint_h() const { return interior_h + 2; }
  bool contains(Position p) const {
    Position lo = footprint_lo(), hi = footprint_hi();
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
};

// The 3x3 window library of admissible obstacle fields: every 3x3 window over
// the family of single-obstacle configurations with interior sizes
// min_interior..generation_bound in each dimension, non-obstacle cells emitted
// as "free"-class wildcards. Deterministic pattern order. The generation bound
// saturates: bound+1 adds nothing (unit-tested).
PatternLibrary sigma_af(int generation_bound = 4, int min_interior = 1);

// Window-center positions whose 3x3 window matches no allowed pattern. Errors
// if the all-background window itself is inadmissible (the violation set would
// be infinite). Result sorted by (x, y).
Result<std::vector<Position>> violations(const Configuration& x, const PatternLibrary& lib);

// Decomposes the obstacle-class support of x into maximal 4-connected regions
// and certifies each as a correctly framed rectangle; also certifies spacing
// (no position sees two distinct obstacles within Chebyshev distance 1, i.e.
// pairwise gap >= 3). Errors carry the offending position.
Result<std::vector<Obstacle>> decompose_obstacles(const Configuration& x);

// Deterministic text listing of an explicit library (one pattern per block,
// wildcards as class names); used by golden-file tests.
std::string library_listing(const PatternLibrary& lib, const Alphabet& alphabet);

}  // namespace obsca
