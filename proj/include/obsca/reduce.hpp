#pragma once
// Compilers: Turing machine -> space-time tile set, tile-set/machine ->
// variants of the obstacle automaton (phi2, phi3, phi4), 1D -> 2D rule lift,
// and the bounded obstacle-size search used to interrogate the results.
//
// The common scheme: a compiled automaton behaves exactly like the plain
// obstacle/particle automaton except that obstacle interiors must carry
// structured material (space-time tiles, or tile x orientation pairs) instead
// of plain 1s. Admissibility of that material is what ties the dynamics to a
// halting or tiling problem.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "obsca/rules.hpp"
#include "obsca/sft.hpp"
#include "obsca/tiles.hpp"
#include "obsca/tm.hpp"

namespace obsca {

// --- machine space-time diagrams as Wang tiles ------------------------------------

// One tile describes one tape cell at one instant. `head` is set when the
// machine head sits on the cell; `in_left` / `in_right` carry a head state
// arriving from the adjacent cell on that side (the horizontal signal that
// moves the head). At most one of the three is set.
struct TmTile {
  int symbol = 0;    // index into TmTiles::symbols
  int head = -1;     // index into TmTiles::states, or -1
  int in_left = -1;  // state arriving from the left neighbor, or -1
  int in_right = -1; // state arriving from the right neighbor, or -1
};

// The compiled tile set plus the designations the encoding needs: the seed
// tile (head in the initial state on a blank cell) forced at the bottom-left
// of a strip, the tiles allowed elsewhere in the bottom row (blank, headless),
// the tiles allowed against the side walls (no signal may cross a wall), and
// the tiles carrying the halting state.
//
// Encoding contract: row r of a valid tiling is the machine configuration at
// time r, so a strip showing the first n steps of the run has n + 1 rows.
struct TmTiles {
  TileSet tiles;
  std::vector<TmTile> fields;  // per tile id
  std::vector<std::string> states;   // sorted state names
  std::vector<std::string> symbols;  // sorted symbol names
  int initial_state = -1;            // index into states
  int halt_state = -1;
  int blank_sym = -1;                // index into symbols

  int seed = -1;                  // tile id forced at the bottom-left cell
  std::vector<int> bottom;        // ids allowed elsewhere in the bottom row
  std::vector<int> wall_left;     // ids allowed in the leftmost column
  std::vector<int> wall_right;    // ids allowed in the rightmost column
  std::vector<int> halt_tiles;    // ids of head tiles in the halt state
};

Result<TmTiles> tm_to_tileset(const TuringMachine& m);

// Tiling decision for a rows x width strip: cell (0,0) is the seed, the rest
// of row 0 is restricted to `bottom`, columns 0 and width-1 to the wall sets.
// allow_halt=false additionally excludes the halt tiles. Same backtracking
// and witness order as tiles_rect.
Tiling tile_strip(const TmTiles& tt, int rows, int width, bool allow_halt);

// Reads one strip row back as a machine configuration (errors unless the row
// carries exactly one head). The returned tape spans the full strip width.
Result<TmConfig> decode_row(const TmTiles& tt, const Tiling& g, int row);

// --- compiled automata -------------------------------------------------------------

struct CompiledCA {
  RuleTablePtr rule_table;
  std::shared_ptr<const PatternLibrary> obstacle_library;
  std::string provenance;  // which compiler and which input produced it
};

// The plain obstacle/particle automaton wrapped for the search and CLI.
CompiledCA plain_f();

// Obstacle interiors must carry a valid space-time diagram of m started on
// the blank tape (seed at the bottom-left, signals confined by the walls).
// phi2 bans the halt-state head everywhere: if m halts at step k, interiors
// taller than k are impossible, while a looping m admits every size.
// phi3 instead requires halting: the halt head is allowed; everything right
// of or above halt material is again halt material; halt material may cover
// a non-flag cell only when swept in from its left (wall or more halt
// material), so a halt row must run wall-to-wall and can never cross a row
// that still carries a movement flag — i.e. halt material appears exactly
// above a genuinely finished run, then pads the rest of the interior. The
// interior cell touching the top-right frame corner must be halt material,
// so admissible obstacles exist iff m halts (heights >= halt step + 1,
// arbitrarily large).
// Both reject machines whose transition table is not total outside the halt
// state: a machine that can get stuck has no halting/looping dichotomy.
Result<CompiledCA> phi2(const TuringMachine& m);
Result<CompiledCA> phi3(const TuringMachine& m);

// Square obstacles over E = tile x role states: a boundary ring of arrow
// roles around a dash interior, carrying a tile of t in every cell. Invalid
// squares (bad ring, forbidden tile pair, stray material) erode; valid ones
// are fixed points. So arbitrarily large stable squares exist iff t tiles
// arbitrarily large rectangles.
Result<CompiledCA> phi4(const TileSet& t);

// Paints a block of E-states with lower-left cell at `lo`; dimensions and the
// tile of each cell come from `g` (both dimensions must be >= 2). `g` need not
// be a valid tiling of anything — deliberately broken blocks are how erosion
// is tested.
void paint_t_obstacle(Configuration& x, Position lo, const BlockLayer& b, const Tiling& g);

// Rebuilds the search-facing form of a guarded rule table loaded from a file
// (block layer -> tile-layer library, compiled grammar -> itself, plain ->
// the builtin library). Errors for rule tables with no obstacle notion
// (lifted 1D rules).
Result<CompiledCA> compiled_from_rule(const RuleTablePtr& rule);

// --- 1D -> 2D lift -----------------------------------------------------------------

// A one-dimensional rule: `next` reads a window of 2*radius+1 cells (left to
// right) and yields the new center state.
struct Rule1D {
  std::string name;
  AlphabetPtr alphabet;
  int radius = 1;
  State background = 0;
  std::function<State(const State*)> next;
};

// The 2D rule that applies `r` to the horizontal row through each cell; every
// row evolves as an independent copy of the 1D automaton.
RuleTablePtr lift_1d_to_2d(const Rule1D& r);

// Named 1D examples over a two-state alphabet ('.' = 0, '#' = 1).
Rule1D rule184();        // the traffic rule
Rule1D identity_1d();
Rule1D shift_left_1d();  // new(i) = old(i + 1)

// Direct 1D reference evolution: cell i of the result is the exact value
// after `steps` applications, assuming everything outside the input row was
// background at time 0. Length is preserved.
std::vector<State> run_1d(const Rule1D& r, std::vector<State> row, int steps);

// Lifted rules serialize as an explicit 1D truth table ("kind: lifted-1d"
// inside a ca-rules v1 file); alphabets up to 4096 windows are supported.
std::string serialize_lifted(const Rule1D& r, const std::string& origin);
Result<Rule1D> parse_lifted_1d(const std::string& text);

// Loads either rule-file flavor: dispatches on the optional "kind:" header
// line (lifted tables vs guarded rules).
Result<RuleTablePtr> load_rule_text(const std::string& text);

// --- bounded obstacle-size search ----------------------------------------------------

struct ObstacleSearch {
  bool any = false;   // some admissible obstacle exists within the bound
  int max_w = 0;      // largest admissible interior width / height seen
  int max_h = 0;
  bool w_hit_bound = false;
  bool h_hit_bound = false;
  bool unbounded_up_to_bound() const { return any && w_hit_bound && h_hit_bound; }
};

// Exhaustive search over interior sizes (w, h), 1..bound each: is there an
// interior filling whose painted obstacle has zero library violations?
// Backtracks cell-by-cell (bottom row first) over the library's interior
// material; compiled square obstacles instead reduce to bounded tiling of
// the tile layer. Deterministic.
ObstacleSearch max_admissible_obstacle(const CompiledCA& ca, int bound);

// The search's inner decision, exposed for tests and the CLI: can the w x h
// interior be filled admissibly? On success, optionally paints the witness
// obstacle (interior origin at `origin`) into *out.
bool fill_interior(const CompiledCA& ca, int w, int h, Configuration* out = nullptr,
                   Position origin = {0, 0});

}  // namespace obsca
