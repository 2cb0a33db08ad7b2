#pragma once
// Rule tables: the abstract local-rule interface, the guarded-rewrite rule
// family used by the obstacle/particle automaton and its compiled variants,
// and the `ca-rules v1` file format.
//
// A guarded rule table updates a cell from its 5x5 window in three stages:
//   1. admissibility: the obstacle-field library must admit the cell's 3x3
//      window (after projecting non-obstacle states to free wildcards, and
//      block-layer states to their plain analogs); otherwise the cell dies
//      to 0. A flag widens this to every 3x3 window inside the 5x5.
//   2. guards: an ordered list of 3x3 guarded rewrites (first match wins).
//   3. default: 0.
// Cells carrying block-layer states (compiled square obstacles over tile x
// role pairs) are updated by the destruction layer instead and never reach
// the guard stage.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "obsca/fdef.hpp"
#include "obsca/grid.hpp"
#include "obsca/sft.hpp"
#include "obsca/util.hpp"

namespace obsca {

// --- abstract rule table -------------------------------------------------------

class RuleTable {
 public:
  virtual ~RuleTable() = default;

  virtual const AlphabetPtr& alphabet() const = 0;
  virtual int radius() const = 0;
  virtual State background() const = 0;
  // window: row-major (2r+1)x(2r+1), top row first.
  virtual State apply(const State* window) const = 0;

  int side() const { return 2 * radius() + 1; }
  int window_cells() const { return side() * side(); }
};

using RuleTablePtr = std::shared_ptr<const RuleTable>;

// --- guarded rewrites ------------------------------------------------------------

// Guard cell tokens (file format uses the same characters):
//   *  free class          #  obstacle class      0  the zero state
//   %  zero or obstacle    ?  anything             U, D  exact particle states
//   x  obstacle class, output marker "keep center" (center position only)
enum class Tok : std::uint8_t { Free, Obst, Zero, ZeroOrObst, Any, LitU, LitD, Keep };

char tok_char(Tok t);
Tok tok_of_char(char c);

struct Guard {
  std::array<Tok, 9> cells{};  // 3x3, top row first
  // Output: fstate::U, fstate::D, or the keep marker (center unchanged).
  bool keep = false;
  State out = fstate::Zero;
  bool rotated = false;  // true for guards produced by rotation expansion
};

// The 17 source rules of the obstacle/particle automaton, prior to rotation
// expansion. rot: expand with 3 clockwise rotations.
struct SourceRule {
  const char* guard;  // 9 whitespace-separated tokens
  char out;           // 'x', 'U' or 'D'
  bool rot;
};
const std::vector<SourceRule>& f_source_rules();

// Rotation by 90 degrees clockwise of a 3x3 guard (top row first).
std::array<Tok, 9> rot90(const std::array<Tok, 9>& g);

// Expands source rules in order into the guard list (rotations appended
// directly after their base rule).
std::vector<Guard> expand_guards(const std::vector<SourceRule>& rules);

// --- block layer (compiled square obstacles) -------------------------------------

// Square obstacles over E = tile x role states. Roles, in the reading order
// of a 3x3 keypad (top row first):
//   0 tl-corner  1 top-edge  2 tr-corner
//   3 left-edge  4 interior  5 right-edge
//   6 bl-corner  7 bottom    8 br-corner
// A valid square block has a single boundary ring of arrow roles around an
// all-interior (dash) core; role analogs map onto the plain obstacle glyphs.
struct BlockLayer {
  State first_e = 0;  // E-states occupy ids [first_e, first_e + 9*tile_count)
  int tile_count = 0;
  // Allowed tile pairs, packed (a << 16) | b: h = (left, right), v = (bottom, top).
  std::vector<std::uint32_t> h_ok, v_ok;            // sorted
  std::vector<std::uint16_t> x2_ok;                 // sorted packed role quads
  static std::uint16_t pack_roles(int tl, int tr, int bl, int br) {
    return static_cast<std::uint16_t>((tl << 12) | (tr << 8) | (bl << 4) | br);
  }

  bool is_e(State s) const {
    return s >= first_e && s < first_e + static_cast<State>(9 * tile_count);
  }
  int role_of(State s) const { return (s - first_e) % 9; }
  int tile_of(State s) const { return (s - first_e) / 9; }
  State e_state(int tile, int role) const {
    return static_cast<State>(first_e + tile * 9 + role);
  }
  // Plain-obstacle analog of an E-state (identity on everything else).
  State analog(State s) const;

  // Update of an E-state center from its 5x5 window: the center state, or 0
  // when one of the three destruction conditions holds (inside error,
  // forbidden outside pair, disconnected E in the 5x5).
  State update_e_center(const State* window) const;

  // Offsets (dx, dy), y up, of the inside/outside split of each role's
  // 8-neighborhood.
  static const std::vector<Position>& inside_offsets(int role);
  static const std::vector<Position>& outside_offsets(int role);
};

// --- the concrete guarded rule table ----------------------------------------------

enum class ViolationScope { CenterWindow, AnyWindowIn5x5 };

class FStyleRule : public RuleTable {
 public:
  FStyleRule(AlphabetPtr alphabet, PatternLibrary case1, std::vector<Guard> guards,
             ViolationScope scope = ViolationScope::CenterWindow,
             std::optional<BlockLayer> block = std::nullopt);

  const AlphabetPtr& alphabet() const override { return alphabet_; }
  int radius() const override { return 2; }
  State background() const override { return fstate::Zero; }
  State apply(const State* window) const override;

  const PatternLibrary& case1_library() const { return case1_; }
  const std::vector<Guard>& guards() const { return guards_; }
  ViolationScope scope() const { return scope_; }
  const std::optional<BlockLayer>& block_layer() const { return block_; }

  // Metadata carried into the rules file.
  std::string name = "obstacle-particle";
  std::string origin = "builtin";

 private:
  bool tok_match(Tok t, State s) const;
  bool guard_matches(const Guard& g, const State* w3) const;
  // 3x3 admissibility of the window centered at (cx, cy) of the 5x5 (offsets
  // from the 5x5 center, |cx|,|cy| <= 1), with analog projection when a block
  // layer is present.
  bool center3_admissible(const State* window, int cx, int cy) const;

  AlphabetPtr alphabet_;
  PatternLibrary case1_;
  std::vector<Guard> guards_;
  ViolationScope scope_;
  std::optional<BlockLayer> block_;
  // Per-token state masks (dynamic bitsets over the alphabet).
  std::array<std::vector<std::uint64_t>, 8> masks_;
};

// The obstacle/particle automaton itself (12 states, radius 2).
std::shared_ptr<const FStyleRule> f_rule_table(
    ViolationScope scope = ViolationScope::CenterWindow);

// --- ca-rules v1 -------------------------------------------------------------------

// Deterministic serialization of a guarded rule table (alphabet, classes,
// case-1 library directive, guards, optional compiled grammar and block
// layer). Grammar libraries serialize their tables; the builtin obstacle
// library serializes as a directive and is regenerated on load.
std::string serialize_rules(const FStyleRule& rule);
Result<std::shared_ptr<const FStyleRule>> parse_rules(const std::string& text);

}  // namespace obsca
