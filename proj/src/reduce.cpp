#include "obsca/reduce.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "obsca/engine.hpp"

namespace obsca {

namespace {

std::string hex16(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

// Display characters available to compiled states: printable ASCII minus the
// base alphabet's glyphs, the comment leader, and the empty-set marker used
// in rules files. Letters and digits first so grids stay readable.
const std::string& display_pool() {
  static const std::string pool = [] {
    const std::string reserved = ".1UDv^<>r7LJ#-";
    std::string p;
    auto take = [&](char lo, char hi) {
      for (char c = lo; c <= hi; ++c)
        if (reserved.find(c) == std::string::npos) p.push_back(c);
    };
    take('a', 'z');
    take('A', 'Z');
    take('0', '9');
    for (char c = 33; c < 127; ++c) {
      if (std::isalnum(static_cast<unsigned char>(c))) continue;
      if (reserved.find(c) == std::string::npos) p.push_back(c);
    }
    return p;
  }();
  return pool;
}

int index_of(const std::vector<std::string>& v, const std::string& s) {
  auto it = std::lower_bound(v.begin(), v.end(), s);
  return it != v.end() && *it == s ? static_cast<int>(it - v.begin()) : -1;
}

}  // namespace

// --- machine space-time diagrams as Wang tiles ------------------------------------

Result<TmTiles> tm_to_tileset(const TuringMachine& m) {
  if (Result<bool> ok = check_tm(m); !ok.ok()) return ok.error();

  TmTiles tt;
  tt.states = m.state_names();
  tt.symbols = m.symbol_names();
  tt.initial_state = index_of(tt.states, m.initial);
  tt.halt_state = index_of(tt.states, m.halt);
  tt.blank_sym = index_of(tt.symbols, m.blank);
  const int n_states = static_cast<int>(tt.states.size());
  const int n_syms = static_cast<int>(tt.symbols.size());

  // Which states ever arrive as a horizontal signal from each side: a right
  // move sends the new state to the right neighbor (arriving from its left),
  // a left move mirrors that. Only those flag tiles exist.
  std::set<int> from_left, from_right;
  for (const auto& [key, act] : m.delta) {
    (act.move == 'R' ? from_left : from_right).insert(index_of(tt.states, act.state));
  }

  auto add_tile = [&](const std::string& name, TmTile f) {
    tt.tiles.names.push_back(name);
    tt.fields.push_back(f);
  };
  // Quiet tiles: no head, no signal.
  for (int s = 0; s < n_syms; ++s) {
    add_tile("c." + tt.symbols[s], TmTile{s, -1, -1, -1});
  }
  // Head tiles, every (state, symbol).
  for (int q = 0; q < n_states; ++q) {
    for (int s = 0; s < n_syms; ++s) {
      add_tile("h." + tt.states[q] + "." + tt.symbols[s], TmTile{s, q, -1, -1});
    }
  }
  // Signal tiles (headless, one incoming side).
  for (int q : from_left) {
    for (int s = 0; s < n_syms; ++s) {
      add_tile("l." + tt.states[q] + "." + tt.symbols[s], TmTile{s, -1, q, -1});
    }
  }
  for (int q : from_right) {
    for (int s = 0; s < n_syms; ++s) {
      add_tile("r." + tt.states[q] + "." + tt.symbols[s], TmTile{s, -1, -1, q});
    }
  }
  {
    std::set<std::string> uniq(tt.tiles.names.begin(), tt.tiles.names.end());
    if (uniq.size() != tt.tiles.names.size()) {
      return Error{"tm_to_tileset: ambiguous tile names; avoid '.' in state/symbol names"};
    }
  }

  const int n_tiles = tt.tiles.size();
  // What each tile does: the action under delta when it carries a (non-halt)
  // head, and the state it emits to each side.
  std::vector<int> emit_r(n_tiles, -1), emit_l(n_tiles, -1);
  std::vector<int> next_sym(n_tiles, -1);  // symbol written by a head tile
  for (int i = 0; i < n_tiles; ++i) {
    const TmTile& f = tt.fields[i];
    if (f.head < 0 || f.head == tt.halt_state) continue;
    auto it = m.delta.find({tt.states[f.head], tt.symbols[f.symbol]});
    if (it == m.delta.end()) continue;  // partial table: a stuck head has no successors
    const TuringMachine::Action& act = it->second;
    const int target = index_of(tt.states, act.state);
    (act.move == 'R' ? emit_r : emit_l)[i] = target;
    next_sym[i] = index_of(tt.symbols, act.symbol);
  }

  // Horizontal pairs: a signal is present on a side exactly when the neighbor
  // on that side emits it.
  for (int a = 0; a < n_tiles; ++a) {
    for (int b = 0; b < n_tiles; ++b) {
      if (emit_r[a] == tt.fields[b].in_left && emit_l[b] == tt.fields[a].in_right) {
        tt.tiles.h_ok.insert(TileSet::pack(a, b));
      }
    }
  }
  // Vertical pairs: quiet cells keep their symbol; a signal cell becomes the
  // arriving head; a head cell becomes the written symbol, headless. New
  // signals may appear on any headless successor.
  for (int a = 0; a < n_tiles; ++a) {
    const TmTile& fa = tt.fields[a];
    for (int b = 0; b < n_tiles; ++b) {
      const TmTile& fb = tt.fields[b];
      bool ok = false;
      if (fa.head >= 0) {
        ok = next_sym[a] >= 0 && fb.head < 0 && fb.symbol == next_sym[a];
      } else if (fa.in_left >= 0 || fa.in_right >= 0) {
        const int q = fa.in_left >= 0 ? fa.in_left : fa.in_right;
        ok = fb.head == q && fb.symbol == fa.symbol;
      } else {
        ok = fb.head < 0 && fb.symbol == fa.symbol;
      }
      if (ok) tt.tiles.v_ok.insert(TileSet::pack(a, b));
    }
  }

  // Designations.
  tt.seed = n_syms + tt.initial_state * n_syms + tt.blank_sym;  // head (initial, blank)
  for (int i = 0; i < n_tiles; ++i) {
    const TmTile& f = tt.fields[i];
    if (f.head < 0 && f.symbol == tt.blank_sym) tt.bottom.push_back(i);
    if (f.in_left < 0 && emit_l[i] < 0) tt.wall_left.push_back(i);
    if (f.in_right < 0 && emit_r[i] < 0) tt.wall_right.push_back(i);
    if (f.head == tt.halt_state) tt.halt_tiles.push_back(i);
  }
  return tt;
}

Tiling tile_strip(const TmTiles& tt, int rows, int width, bool allow_halt) {
  if (rows < 1 || width < 1) throw std::invalid_argument("tile_strip: dimensions must be >= 1");
  const TileSet& t = tt.tiles;
  const int n_tiles = t.size();
  std::vector<char> is_halt(n_tiles, 0), is_bottom(n_tiles, 0), is_left(n_tiles, 0),
      is_right(n_tiles, 0);
  for (int i : tt.halt_tiles) is_halt[i] = 1;
  for (int i : tt.bottom) is_bottom[i] = 1;
  for (int i : tt.wall_left) is_left[i] = 1;
  for (int i : tt.wall_right) is_right[i] = 1;

  Tiling g;
  g.width = width;
  g.height = rows;
  const int n_cells = width * rows;
  std::vector<int> cells(n_cells, -1);
  int i = 0;
  while (true) {
    const int r = i / width, c = i % width;
    const int left = c > 0 ? cells[i - 1] : -1;
    const int below = r > 0 ? cells[i - width] : -1;
    int cand = cells[i] + 1;
    int chosen = -1;
    for (; cand < n_tiles; ++cand) {
      if (!allow_halt && is_halt[cand]) continue;
      if (r == 0 && (c == 0 ? cand != tt.seed : !is_bottom[cand])) continue;
      if (c == 0 && !is_left[cand]) continue;
      if (c == width - 1 && !is_right[cand]) continue;
      if (left >= 0 && !t.h_ok.count(TileSet::pack(left, cand))) continue;
      if (below >= 0 && !t.v_ok.count(TileSet::pack(below, cand))) continue;
      chosen = cand;
      break;
    }
    if (chosen < 0) {
      cells[i] = -1;
      if (i == 0) return g;
      --i;
      continue;
    }
    cells[i] = chosen;
    if (++i == n_cells) {
      g.tilable = true;
      g.cells = std::move(cells);
      return g;
    }
  }
}

Result<TmConfig> decode_row(const TmTiles& tt, const Tiling& g, int row) {
  if (!g.tilable) return Error{"decode_row: tiling has no witness"};
  if (row < 0 || row >= g.height) return Error{"decode_row: row out of range"};
  TmConfig cfg;
  cfg.head = -1;
  for (int c = 0; c < g.width; ++c) {
    const TmTile& f = tt.fields[g.cells[row * g.width + c]];
    cfg.tape.push_back(tt.symbols[f.symbol]);
    if (f.head >= 0) {
      if (cfg.head >= 0) return Error{"decode_row: two heads in row " + std::to_string(row)};
      cfg.head = c;
      cfg.state = tt.states[f.head];
    }
  }
  if (cfg.head < 0) return Error{"decode_row: no head in row " + std::to_string(row)};
  return cfg;
}

// --- phi2 / phi3 -------------------------------------------------------------------

namespace {

Result<CompiledCA> compile_tm(const TuringMachine& m, bool halting_variant) {
  const std::string which = halting_variant ? "phi3" : "phi2";
  if (!tm_total(m)) {
    return Error{which +
                 ": transition table is not total outside the final state; a machine that can "
                 "get stuck has no halting/looping dichotomy to encode"};
  }
  Result<TmTiles> built = tm_to_tileset(m);
  if (!built.ok()) return built.error();
  const TmTiles tt = std::move(built).take();
  const int n_tiles = tt.tiles.size();

  const std::string& pool = display_pool();
  if (n_tiles > static_cast<int>(pool.size())) {
    return Error{which + ": machine needs " + std::to_string(n_tiles) +
                 " tile states, more than the " + std::to_string(pool.size()) +
                 " display characters available"};
  }
  std::vector<std::pair<std::string, char>> extra;
  for (int i = 0; i < n_tiles; ++i) extra.emplace_back(tt.tiles.names[i], pool[i]);
  AlphabetPtr alphabet = extend_f_alphabet(which, extra, "tile");
  const auto tile_state = [](int id) { return static_cast<State>(fstate::Count + id); };

  std::vector<char> is_halt(n_tiles, 0);
  for (int i : tt.halt_tiles) is_halt[i] = 1;

  InteriorGrammar g;
  g.base = std::make_shared<PatternLibrary>(sigma_af());
  for (int i = 0; i < n_tiles; ++i) g.interior.push_back(tile_state(i));
  // Plain 1-interiors are never admissible in a compiled automaton: every
  // obstacle must carry a run of the machine, or arbitrarily large inert
  // obstacles would exist regardless of the machine encoded.
  g.banned.push_back(fstate::One);
  if (!halting_variant) {
    for (int i : tt.halt_tiles) g.banned.push_back(tile_state(i));
  }
  for (int a = 0; a < n_tiles; ++a) {
    const TmTile& fa = tt.fields[a];
    const bool a_flag = fa.in_left >= 0 || fa.in_right >= 0;
    for (int b = 0; b < n_tiles; ++b) {
      const std::uint32_t key = InteriorGrammar::pack(tile_state(a), tile_state(b));
      if (tt.tiles.h_ok.count(TileSet::pack(a, b))) {
        // Everything right of halt material must again be halt material
        // (or the frame wall, handled positionally).
        if (!halting_variant || !is_halt[a] || is_halt[b]) g.h_ok.insert(key);
      }
      if (tt.tiles.v_ok.count(TileSet::pack(a, b))) g.v_ok.insert(key);
      if (halting_variant && is_halt[b]) {
        if (is_halt[a]) {
          // Halt columns continue upward unconditionally.
          g.v_ok.insert(key);
        } else if (!a_flag) {
          // Halt material above anything except a movement flag — but only
          // with halt material (or the left wall) on its left, so a halt row
          // must sweep wall-to-wall. A still-running row always carries a
          // flag, which blocks the sweep; the genuine halt row has none.
          g.pad_below.insert(key);
        }
      }
    }
  }
  for (int i : tt.wall_left) g.left_col.push_back(tile_state(i));
  for (int i : tt.wall_right) g.right_col.push_back(tile_state(i));
  for (int i : tt.bottom) g.bottom_row.push_back(tile_state(i));
  g.seed = tile_state(tt.seed);
  if (halting_variant) {
    // The interior cell touching the top-right frame corner must be halt
    // material: an admissible obstacle must contain a finished run.
    for (int i : tt.halt_tiles) {
      g.top_right.push_back(tile_state(i));
      g.pad_states.push_back(tile_state(i));
    }
  }
  std::sort(g.interior.begin(), g.interior.end());
  std::sort(g.banned.begin(), g.banned.end());
  std::sort(g.left_col.begin(), g.left_col.end());
  std::sort(g.right_col.begin(), g.right_col.end());
  std::sort(g.bottom_row.begin(), g.bottom_row.end());
  std::sort(g.top_right.begin(), g.top_right.end());
  std::sort(g.pad_states.begin(), g.pad_states.end());

  auto lib = std::make_shared<PatternLibrary>();
  lib->name = which;
  lib->grammar = std::move(g);

  auto rule = std::make_shared<FStyleRule>(alphabet, *lib, expand_guards(f_source_rules()),
                                           ViolationScope::CenterWindow);
  rule->name = which;
  const std::string prov = which + " machine=" + hex16(Fnv1a::of(serialize_tm(m))) +
                           " states=" + std::to_string(tt.states.size()) +
                           " symbols=" + std::to_string(tt.symbols.size()) +
                           " transitions=" + std::to_string(m.delta.size());
  rule->origin = prov;

  CompiledCA ca;
  ca.rule_table = rule;
  ca.obstacle_library = lib;
  ca.provenance = prov;
  return ca;
}

}  // namespace

Result<CompiledCA> phi2(const TuringMachine& m) { return compile_tm(m, false); }
Result<CompiledCA> phi3(const TuringMachine& m) { return compile_tm(m, true); }

// --- phi4 --------------------------------------------------------------------------

namespace {

// Role of cell (dx, dy) in a w x h block, y up: a single boundary ring of
// arrows around a dash interior. Requires w, h >= 2.
int block_role(int dx, int dy, int w, int h) {
  const bool l = dx == 0, r = dx == w - 1, b = dy == 0, t = dy == h - 1;
  if (l && t) return 0;
  if (t && r) return 2;
  if (l && b) return 6;
  if (b && r) return 8;
  if (t) return 1;
  if (l) return 3;
  if (r) return 5;
  if (b) return 7;
  return 4;
}

// All 2x2 role windows appearing in canonical square blocks. Saturates by
// side 6; generated well past that.
std::vector<std::uint16_t> canonical_x2() {
  std::set<std::uint16_t> keys;
  for (int side = 2; side <= 21; ++side) {
    for (int x = 0; x + 1 < side; ++x) {
      for (int y = 1; y < side; ++y) {
        keys.insert(BlockLayer::pack_roles(
            block_role(x, y, side, side), block_role(x + 1, y, side, side),
            block_role(x, y - 1, side, side), block_role(x + 1, y - 1, side, side)));
      }
    }
  }
  return {keys.begin(), keys.end()};
}

const char* kRoleNames[9] = {"tl", "t", "tr", "l", "c", "r", "bl", "b", "br"};

}  // namespace

void paint_t_obstacle(Configuration& x, Position lo, const BlockLayer& b, const Tiling& g) {
  if (!g.tilable) throw std::invalid_argument("paint_t_obstacle: tiling has no witness");
  if (g.width < 2 || g.height < 2) {
    throw std::invalid_argument("paint_t_obstacle: blocks need both dimensions >= 2");
  }
  for (int dy = 0; dy < g.height; ++dy) {
    for (int dx = 0; dx < g.width; ++dx) {
      const int tile = g.cells[dy * g.width + dx];
      if (tile < 0 || tile >= b.tile_count) {
        throw std::invalid_argument("paint_t_obstacle: tile id out of range");
      }
      x.set({lo.x + dx, lo.y + dy}, b.e_state(tile, block_role(dx, dy, g.width, g.height)));
    }
  }
}

namespace {

// Admissibility of a 3x3 window around block material: the plain-obstacle
// projection must be admissible, every fully-E 2x2 must be a canonical ring
// window, and adjacent E-cells must carry an allowed tile pair.
std::shared_ptr<const PatternLibrary> block_library(const BlockLayer& block) {
  auto base = std::make_shared<PatternLibrary>(sigma_af());
  auto lib = std::make_shared<PatternLibrary>();
  lib->name = "phi4";
  lib->custom = [block, base](const State* cells, const Alphabet& a) {
    auto is_e = [&](int i) { return block.is_e(cells[i]); };
    bool any_e = false;
    for (int i = 0; i < 9; ++i) any_e = any_e || is_e(i);
    // Away from block material the scaffold is the plain one.
    if (!any_e) return base->admits(cells, a);

    // Block cells visible in one window must belong to one block: they form
    // a connected sub-rectangle. Two blocks close enough to share a window
    // are too close to coexist (same threshold as the plain spacing rule).
    {
      int start = 0;
      while (!is_e(start)) ++start;
      bool seen[9] = {false};
      int stack[9], top = 0;
      stack[top++] = start;
      seen[start] = true;
      while (top > 0) {
        const int i = stack[--top];
        const int next[4] = {i % 3 > 0 ? i - 1 : -1, i % 3 < 2 ? i + 1 : -1,
                             i >= 3 ? i - 3 : -1, i < 6 ? i + 3 : -1};
        for (int j : next)
          if (j >= 0 && is_e(j) && !seen[j]) {
            seen[j] = true;
            stack[top++] = j;
          }
      }
      for (int i = 0; i < 9; ++i)
        if (is_e(i) && !seen[i]) return false;
    }

    // Every fully visible 2x2 of block material must match a boundary-ring
    // window of some valid block.
    for (int tl : {0, 1, 3, 4}) {
      if (is_e(tl) && is_e(tl + 1) && is_e(tl + 3) && is_e(tl + 4)) {
        const std::uint16_t key = BlockLayer::pack_roles(
            block.role_of(cells[tl]), block.role_of(cells[tl + 1]),
            block.role_of(cells[tl + 3]), block.role_of(cells[tl + 4]));
        if (!std::binary_search(block.x2_ok.begin(), block.x2_ok.end(), key)) return false;
      }
    }
    auto pair_ok = [&](const std::vector<std::uint32_t>& table, int lo, int hi) {
      const std::uint32_t key = (static_cast<std::uint32_t>(block.tile_of(cells[lo])) << 16) |
                                static_cast<std::uint32_t>(block.tile_of(cells[hi]));
      return std::binary_search(table.begin(), table.end(), key);
    };
    for (int i = 0; i < 9; ++i) {
      if (!is_e(i)) continue;
      if (i % 3 < 2 && is_e(i + 1) && !pair_ok(block.h_ok, i, i + 1)) return false;
      // Window rows run top-down: cell i+3 sits below cell i.
      if (i < 6 && is_e(i + 3) && !pair_ok(block.v_ok, i + 3, i)) return false;
    }
    // Ring arrows point outward: each block cell's neighborhood splits by its
    // role into a block side (more material) and a free side (empty space or
    // passing particles).
    for (int i = 0; i < 9; ++i) {
      if (!is_e(i)) continue;
      const int col = i % 3, row = i / 3;
      const int role = block.role_of(cells[i]);
      const auto visible = [&](Position d, State* out) {
        const int c = col + d.x, r = row - d.y;  // +dy is up, rows top-down
        if (c < 0 || c > 2 || r < 0 || r > 2) return false;
        *out = cells[r * 3 + c];
        return true;
      };
      State n = 0;
      for (const Position& d : BlockLayer::inside_offsets(role))
        if (visible(d, &n) && !block.is_e(n)) return false;
      for (const Position& d : BlockLayer::outside_offsets(role))
        if (visible(d, &n) && n != fstate::Zero && n != fstate::U && n != fstate::D) return false;
    }
    return true;
  };
  return lib;
}

}  // namespace

Result<CompiledCA> phi4(const TileSet& t) {
  const int n_tiles = t.size();
  if (n_tiles == 0) return Error{"phi4: empty tile set"};
  for (std::uint32_t p : t.h_ok) {
    if (static_cast<int>(p >> 16) >= n_tiles || static_cast<int>(p & 0xffff) >= n_tiles) {
      return Error{"phi4: horizontal constraint references a missing tile"};
    }
  }
  for (std::uint32_t p : t.v_ok) {
    if (static_cast<int>(p >> 16) >= n_tiles || static_cast<int>(p & 0xffff) >= n_tiles) {
      return Error{"phi4: vertical constraint references a missing tile"};
    }
  }
  const std::string& pool = display_pool();
  if (9 * n_tiles > static_cast<int>(pool.size())) {
    return Error{"phi4: " + std::to_string(n_tiles) + " tiles need " +
                 std::to_string(9 * n_tiles) + " display characters, more than the " +
                 std::to_string(pool.size()) + " available"};
  }

  std::vector<std::pair<std::string, char>> extra;
  for (int i = 0; i < n_tiles; ++i) {
    for (int role = 0; role < 9; ++role) {
      extra.emplace_back("e." + t.names[i] + "." + kRoleNames[role], pool[i * 9 + role]);
    }
  }
  AlphabetPtr alphabet = extend_f_alphabet("phi4", extra, "e");

  BlockLayer block;
  block.first_e = fstate::Count;
  block.tile_count = n_tiles;
  block.h_ok.assign(t.h_ok.begin(), t.h_ok.end());
  block.v_ok.assign(t.v_ok.begin(), t.v_ok.end());
  std::sort(block.h_ok.begin(), block.h_ok.end());
  std::sort(block.v_ok.begin(), block.v_ok.end());
  block.x2_ok = canonical_x2();

  auto rule = std::make_shared<FStyleRule>(alphabet, sigma_af(), expand_guards(f_source_rules()),
                                           ViolationScope::CenterWindow, block);
  rule->name = "phi4";
  const std::string prov = "phi4 tiles=" + hex16(Fnv1a::of(serialize_tiles(t))) + " count=" +
                           std::to_string(n_tiles);
  rule->origin = prov;

  CompiledCA ca;
  ca.rule_table = rule;
  ca.obstacle_library = block_library(block);
  ca.provenance = prov;
  return ca;
}

Result<CompiledCA> compiled_from_rule(const RuleTablePtr& rule) {
  auto fr = std::dynamic_pointer_cast<const FStyleRule>(rule);
  if (!fr) return Error{"compiled_from_rule: rule table has no obstacle library"};
  CompiledCA ca;
  ca.rule_table = rule;
  ca.obstacle_library = fr->block_layer()
                            ? block_library(*fr->block_layer())
                            : std::make_shared<const PatternLibrary>(fr->case1_library());
  ca.provenance = fr->origin;
  return ca;
}

// --- 1D -> 2D lift -----------------------------------------------------------------

namespace {

class LiftedRule final : public RuleTable {
 public:
  explicit LiftedRule(Rule1D r) : r_(std::move(r)) {}

  const AlphabetPtr& alphabet() const override { return r_.alphabet; }
  int radius() const override { return r_.radius; }
  State background() const override { return r_.background; }
  State apply(const State* window) const override {
    // The horizontal row through the center of the (2r+1)^2 window.
    return r_.next(window + r_.radius * side());
  }

 private:
  Rule1D r_;
};

AlphabetPtr two_state_alphabet() {
  static const AlphabetPtr a = [] {
    auto alpha = std::make_shared<Alphabet>("binary");
    alpha->add_state("0", '.');
    alpha->add_state("1", '#');
    return alpha;
  }();
  return a;
}

}  // namespace

RuleTablePtr lift_1d_to_2d(const Rule1D& r) {
  if (!r.alphabet || !r.next || r.radius < 0) {
    throw std::invalid_argument("lift_1d_to_2d: incomplete 1D rule");
  }
  std::vector<State> quiet(2 * r.radius + 1, r.background);
  if (r.next(quiet.data()) != r.background) {
    throw std::invalid_argument("lift_1d_to_2d: background is not quiescent");
  }
  return std::make_shared<const LiftedRule>(r);
}

Rule1D rule184() {
  Rule1D r;
  r.name = "rule184";
  r.alphabet = two_state_alphabet();
  r.radius = 1;
  r.background = 0;
  r.next = [](const State* w) -> State {
    const int idx = w[0] * 4 + w[1] * 2 + w[2];
    return static_cast<State>((184 >> idx) & 1);
  };
  return r;
}

Rule1D identity_1d() {
  Rule1D r;
  r.name = "identity";
  r.alphabet = two_state_alphabet();
  r.radius = 1;
  r.background = 0;
  r.next = [](const State* w) -> State { return w[1]; };
  return r;
}

Rule1D shift_left_1d() {
  Rule1D r;
  r.name = "shift-left";
  r.alphabet = two_state_alphabet();
  r.radius = 1;
  r.background = 0;
  r.next = [](const State* w) -> State { return w[2]; };
  return r;
}

std::vector<State> run_1d(const Rule1D& r, std::vector<State> row, int steps) {
  if (steps < 0) throw std::invalid_argument("run_1d: steps must be >= 0");
  const int rad = r.radius;
  const int n = static_cast<int>(row.size());
  const int pad = steps * rad + rad + 1;
  std::vector<State> cur(n + 2 * pad, r.background);
  std::copy(row.begin(), row.end(), cur.begin() + pad);
  std::vector<State> next(cur.size(), r.background);
  std::vector<State> win(2 * rad + 1, r.background);
  for (int t = 0; t < steps; ++t) {
    for (int i = 0; i < static_cast<int>(cur.size()); ++i) {
      for (int d = -rad; d <= rad; ++d) {
        const int j = i + d;
        win[d + rad] = j >= 0 && j < static_cast<int>(cur.size()) ? cur[j] : r.background;
      }
      next[i] = r.next(win.data());
    }
    cur.swap(next);
  }
  return {cur.begin() + pad, cur.begin() + pad + n};
}

std::string serialize_lifted(const Rule1D& r, const std::string& origin) {
  const Alphabet& a = *r.alphabet;
  const int n = a.size(), width = 2 * r.radius + 1;
  std::size_t n_windows = 1;
  for (int i = 0; i < width; ++i) {
    n_windows *= n;
    if (n_windows > 4096) {
      throw std::invalid_argument("serialize_lifted: table too large (over 4096 windows)");
    }
  }
  std::ostringstream out;
  out << "ca-rules v1\n";
  out << "name: " << r.name << '\n';
  out << "origin: " << origin << '\n';
  out << "kind: lifted-1d\n";
  out << "radius: " << r.radius << '\n';
  out << "states: " << n << '\n';
  for (State s = 0; s < n; ++s) out << "state: " << a.state_name(s) << ' ' << a.display(s) << '\n';
  out << "background: " << a.state_name(r.background) << '\n';
  std::vector<State> win(width, 0);
  for (std::size_t k = 0; k < n_windows; ++k) {
    std::size_t v = k;
    for (int i = width - 1; i >= 0; --i) {
      win[i] = static_cast<State>(v % n);
      v /= n;
    }
    out << "map: ";
    for (int i = 0; i < width; ++i) out << a.display(win[i]);
    out << " -> " << a.display(r.next(win.data())) << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::string> split_ws_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '#' && cur.empty() && out.empty()) break;  // whole-line comments only
    if (c == ' ' || c == '\t' || c == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

Result<Rule1D> parse_lifted_1d(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto next_tokens = [&](std::vector<std::string>& tok) {
    while (std::getline(in, line)) {
      ++line_no;
      tok = split_ws_line(line);
      if (!tok.empty()) return true;
    }
    return false;
  };
  auto fail = [&](const std::string& what) {
    return Error{"lifted rules line " + std::to_string(line_no) + ": " + what};
  };
  std::vector<std::string> tok;
  auto expect = [&](const std::string& key) -> Result<std::vector<std::string>> {
    if (!next_tokens(tok)) return fail("unexpected end of file, wanted '" + key + "'");
    if (tok[0] != key) return fail("expected '" + key + "', got '" + tok[0] + "'");
    return std::vector<std::string>(tok.begin() + 1, tok.end());
  };

  if (!next_tokens(tok) || tok.size() != 2 || tok[0] != "ca-rules" || tok[1] != "v1") {
    return fail("expected header 'ca-rules v1'");
  }
  Rule1D r;
  auto name = expect("name:");
  if (!name.ok()) return name.error();
  r.name = name.value().empty() ? "lifted" : name.value()[0];
  if (auto v = expect("origin:"); !v.ok()) return v.error();
  if (auto v = expect("kind:"); !v.ok()) {
    return v.error();
  } else if (v.value() != std::vector<std::string>{"lifted-1d"}) {
    return fail("kind must be lifted-1d");
  }
  auto read_int = [&](const Result<std::vector<std::string>>& v) {
    if (v.value().size() != 1) throw std::invalid_argument("wanted one number");
    return std::stoi(v.value()[0]);
  };
  auto rad = expect("radius:");
  if (!rad.ok()) return rad.error();
  try {
    r.radius = read_int(rad);
  } catch (const std::exception&) {
    return fail("radius must be a number");
  }
  if (r.radius < 0 || r.radius > 5) return fail("radius out of range");
  auto count = expect("states:");
  if (!count.ok()) return count.error();
  int n = 0;
  try {
    n = read_int(count);
  } catch (const std::exception&) {
    return fail("state count must be a number");
  }
  if (n < 1 || n > 64) return fail("state count out of range");
  auto alpha = std::make_shared<Alphabet>(r.name);
  for (int i = 0; i < n; ++i) {
    auto st = expect("state:");
    if (!st.ok()) return st.error();
    if (st.value().size() != 2 || st.value()[1].size() != 1) {
      return fail("state lines are 'state: <name> <char>'");
    }
    alpha->add_state(st.value()[0], st.value()[1][0]);
  }
  r.alphabet = alpha;
  auto bg = expect("background:");
  if (!bg.ok()) return bg.error();
  if (bg.value().size() != 1 || !alpha->has_state(bg.value()[0])) {
    return fail("unknown background state");
  }
  r.background = alpha->state(bg.value()[0]);

  const int width = 2 * r.radius + 1;
  std::size_t n_windows = 1;
  for (int i = 0; i < width; ++i) n_windows *= n;
  if (n_windows > 4096) return fail("table too large");
  std::vector<int> table(n_windows, -1);
  for (std::size_t k = 0; k < n_windows; ++k) {
    auto mp = expect("map:");
    if (!mp.ok()) return mp.error();
    if (mp.value().size() != 3 || mp.value()[1] != "->" ||
        mp.value()[0].size() != static_cast<std::size_t>(width) || mp.value()[2].size() != 1) {
      return fail("map lines are 'map: <window> -> <char>'");
    }
    std::size_t idx = 0;
    try {
      for (char c : mp.value()[0]) idx = idx * n + alpha->state_of_char(c);
      const State out = alpha->state_of_char(mp.value()[2][0]);
      if (table[idx] >= 0) return fail("duplicate map entry");
      table[idx] = out;
    } catch (const std::exception& e) {
      return fail(e.what());
    }
  }
  r.next = [table = std::move(table), n, width](const State* w) -> State {
    std::size_t idx = 0;
    for (int i = 0; i < width; ++i) idx = idx * n + w[i];
    return static_cast<State>(table[idx]);
  };
  return r;
}

Result<RuleTablePtr> load_rule_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool lifted = false;
  for (int i = 0; i < 8 && std::getline(in, line); ++i) {
    const auto tok = split_ws_line(line);
    if (tok.size() == 2 && tok[0] == "kind:" && tok[1] == "lifted-1d") {
      lifted = true;
      break;
    }
  }
  if (lifted) {
    Result<Rule1D> r = parse_lifted_1d(text);
    if (!r.ok()) return r.error();
    try {
      return RuleTablePtr(lift_1d_to_2d(r.value()));
    } catch (const std::exception& e) {
      return Error{std::string("lifted rules: ") + e.what()};
    }
  }
  Result<std::shared_ptr<const FStyleRule>> r = parse_rules(text);
  if (!r.ok()) return r.error();
  return RuleTablePtr(std::move(r).take());
}

// --- plain automaton + obstacle-size search ----------------------------------------

CompiledCA plain_f() {
  CompiledCA ca;
  auto rule = f_rule_table();
  ca.rule_table = rule;
  ca.obstacle_library = std::make_shared<const PatternLibrary>(rule->case1_library());
  ca.provenance = "plain obstacle-particle automaton";
  return ca;
}

namespace {

TileSet tiles_of_block(const BlockLayer& b) {
  TileSet t;
  for (int i = 0; i < b.tile_count; ++i) t.names.push_back("t" + std::to_string(i));
  t.h_ok.insert(b.h_ok.begin(), b.h_ok.end());
  t.v_ok.insert(b.v_ok.begin(), b.v_ok.end());
  return t;
}

// Backtracking fill of a w x h interior against the library. The frame and a
// zero margin live in a local board; windows are checked as soon as all nine
// of their cells are decided.
bool fill_plain_interior(const PatternLibrary& lib, const AlphabetPtr& alphabet,
                         const std::vector<State>& cand, int w, int h, Configuration* out,
                         Position origin) {
  const int margin = 2;  // zero ring beyond the frame, wide enough for any window
  const int W = w + 2 + 2 * margin, H = h + 2 + 2 * margin;
  std::vector<State> board(static_cast<std::size_t>(W) * H, fstate::Zero);
  const auto at = [&](int bx, int by) -> State& {
    return board[static_cast<std::size_t>(by) * W + bx];
  };
  for (int fx = 0; fx < w + 2; ++fx) {
    for (int fy = 0; fy < h + 2; ++fy) {
      at(margin + fx, margin + fy) = obstacle_footprint_state(fx, fy, w + 2, h + 2);
    }
  }
  // Interior cell k (scan order: bottom row first, left to right) sits at
  // board position (margin + 1 + k % w, margin + 1 + k / w).
  const int total = w * h;
  const auto scan_of = [&](int bx, int by) -> int {  // -1 when not interior
    const int i = bx - margin - 1, j = by - margin - 1;
    return i >= 0 && i < w && j >= 0 && j < h ? j * w + i : -1;
  };

  const InteriorGrammar* g = lib.grammar ? &*lib.grammar : nullptr;
  const auto in_set = [](const std::vector<State>& set, State s) {
    return std::binary_search(set.begin(), set.end(), s);
  };

  // Window admissibility centered at (cx, cy), only once fully decided.
  const auto window_ok = [&](int cx, int cy, int placed) {
    if (cx < 1 || cy < 1 || cx >= W - 1 || cy >= H - 1) return true;
    State win[9];
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        const int bx = cx - 1 + c, by = cy + 1 - r;
        const int k = scan_of(bx, by);
        if (k > placed) return true;  // not decided yet; checked later
        win[r * 3 + c] = at(bx, by);
      }
    }
    return lib.admits(win, *alphabet);
  };

  std::vector<int> choice(total, -1);
  int k = 0;
  while (true) {
    const int i = k % w, j = k / w;
    const int bx = margin + 1 + i, by = margin + 1 + j;
    int c = choice[k] + 1;
    int chosen = -1;
    for (; c < static_cast<int>(cand.size()); ++c) {
      const State s = cand[c];
      if (g) {
        // Cheap local pruning; the window checks below stay authoritative.
        if (g->seed && i == 0 && j == 0 && s != *g->seed) continue;
        if (i == 0 && !g->left_col.empty() && !in_set(g->left_col, s)) continue;
        if (i == w - 1 && !g->right_col.empty() && !in_set(g->right_col, s)) continue;
        if (j == 0 && !(i == 0 && g->seed) && !g->bottom_row.empty() &&
            !in_set(g->bottom_row, s)) {
          continue;
        }
        if (j == h - 1 && !g->top_row.empty() && !in_set(g->top_row, s)) continue;
        if (i == w - 1 && j == h - 1 && !g->top_right.empty() && !in_set(g->top_right, s)) {
          continue;
        }
        if (i > 0 && !g->h_ok.count(InteriorGrammar::pack(at(bx - 1, by), s))) continue;
        if (j > 0) {
          const std::uint32_t key = InteriorGrammar::pack(at(bx, by - 1), s);
          const State left_cell = at(bx - 1, by);  // frame edge when i == 0
          if (!g->v_ok.count(key) &&
              !(g->pad_below.count(key) && (left_cell == fstate::LeftEdge ||
                                            in_set(g->pad_states, left_cell)))) {
            continue;
          }
        }
      }
      at(bx, by) = s;
      bool ok = true;
      for (int dy = -1; dy <= 1 && ok; ++dy) {
        for (int dx = -1; dx <= 1 && ok; ++dx) {
          ok = window_ok(bx + dx, by + dy, k);
        }
      }
      if (ok) {
        chosen = c;
        break;
      }
    }
    if (chosen < 0) {
      choice[k] = -1;
      if (k == 0) return false;
      --k;
      continue;
    }
    choice[k] = chosen;
    if (++k == total) break;
  }

  // Belt and braces: the painted obstacle must have zero violations.
  Configuration x(alphabet, fstate::Zero);
  for (int by = 0; by < H; ++by) {
    for (int bx = 0; bx < W; ++bx) {
      const State s = at(bx, by);
      if (s != fstate::Zero) {
        x.set({origin.x + bx - margin - 1, origin.y + by - margin - 1}, s);
      }
    }
  }
  Result<std::vector<Position>> v = violations(x, lib);
  if (!v.ok() || !v.value().empty()) return false;
  if (out) *out = x;
  return true;
}

}  // namespace

bool fill_interior(const CompiledCA& ca, int w, int h, Configuration* out, Position origin) {
  if (w < 1 || h < 1) throw std::invalid_argument("fill_interior: dimensions must be >= 1");
  if (!ca.rule_table || !ca.obstacle_library) {
    throw std::invalid_argument("fill_interior: incomplete compiled automaton");
  }
  const auto* fr = dynamic_cast<const FStyleRule*>(ca.rule_table.get());
  if (fr && fr->block_layer()) {
    // Square-block material: the ring geometry exists only for 2x2 blocks and
    // blocks with both dimensions >= 3; inside that, admissibility is exactly
    // tilability of the tile layer.
    const BlockLayer& b = *fr->block_layer();
    if (!((w == 2 && h == 2) || (w >= 3 && h >= 3))) return false;
    const Tiling g = tiles_rect(tiles_of_block(b), w, h);
    if (!g.tilable) return false;
    Configuration x(ca.rule_table->alphabet(), fstate::Zero);
    paint_t_obstacle(x, origin, b, g);
    Result<std::vector<Position>> v = violations(x, *ca.obstacle_library);
    if (!v.ok() || !v.value().empty()) return false;
    if (out) *out = x;
    return true;
  }

  std::vector<State> cand;
  if (ca.obstacle_library->grammar) {
    const InteriorGrammar& g = *ca.obstacle_library->grammar;
    for (State s : g.interior) {
      if (!std::binary_search(g.banned.begin(), g.banned.end(), s)) cand.push_back(s);
    }
  } else {
    cand.push_back(fstate::One);
  }
  return fill_plain_interior(*ca.obstacle_library, ca.rule_table->alphabet(), cand, w, h, out,
                             origin);
}

ObstacleSearch max_admissible_obstacle(const CompiledCA& ca, int bound) {
  if (bound < 1) throw std::invalid_argument("max_admissible_obstacle: bound must be >= 1");
  ObstacleSearch r;
  for (int w = 1; w <= bound; ++w) {
    for (int h = 1; h <= bound; ++h) {
      if (fill_interior(ca, w, h)) {
        r.any = true;
        r.max_w = std::max(r.max_w, w);
        r.max_h = std::max(r.max_h, h);
      }
    }
  }
  r.w_hit_bound = r.any && r.max_w == bound;
  r.h_hit_bound = r.any && r.max_h == bound;
  return r;
}

}  // namespace obsca
