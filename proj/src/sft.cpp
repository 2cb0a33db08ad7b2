#include "obsca/sft.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace obsca {

namespace {

constexpr State kSentinel = 0xffff;

// Window cells for the 3x3 centered at c, top row first.
inline void window3(const Configuration& x, Position c, State out[9]) {
  int i = 0;
  for (int dy = 1; dy >= -1; --dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      out[i++] = x.get({c.x + dx, c.y + dy});
    }
  }
}

}  // namespace

std::size_t PatternLibrary::ArrayHash::operator()(const std::array<State, 9>& a) const {
  Fnv1a h;
  h.update(a.data(), a.size() * sizeof(State));
  return static_cast<std::size_t>(h.value());
}

void PatternLibrary::build_index(const Alphabet& alphabet) {
  if (grammar || custom) return;
  index_.clear();
  wildcard_class_.clear();
  if (window_w != 3 || window_h != 3) {
    throw std::invalid_argument("PatternLibrary::build_index: index supports 3x3 windows only");
  }
  for (const Pattern& p : allowed) {
    if (p.width != window_w || p.height != window_h) {
      throw std::invalid_argument("PatternLibrary::build_index: pattern size mismatch");
    }
    std::array<State, 9> key{};
    for (int i = 0; i < 9; ++i) {
      const PatternCell& c = p.cells[i];
      if (c.wildcard) {
        if (wildcard_class_.empty()) wildcard_class_ = c.cls;
        if (c.cls != wildcard_class_) {
          throw std::invalid_argument("PatternLibrary::build_index: mixed wildcard classes");
        }
        key[i] = kSentinel;
      } else {
        key[i] = c.state;
      }
    }
    index_.insert(key);
  }
  projects_.assign(static_cast<std::size_t>(alphabet.size()), 0);
  if (!wildcard_class_.empty()) {
    for (State s : alphabet.class_members(wildcard_class_)) projects_[s] = 1;
  }
  indexed_ = true;
}

bool PatternLibrary::admits(const State* cells, const Alphabet& alphabet) const {
  if (custom) return custom(cells, alphabet);
  if (grammar) return grammar_admits(cells, alphabet);
  if (indexed_) {
    std::array<State, 9> key{};
    for (int i = 0; i < 9; ++i) {
      State s = cells[i];
      key[i] = (s < projects_.size() && projects_[s]) ? kSentinel : s;
    }
    return index_.count(key) > 0;
  }
  // Slow path: wildcard matching against every allowed pattern.
  Pattern q;
  q.width = window_w;
  q.height = window_h;
  q.cells.reserve(static_cast<std::size_t>(window_w) * window_h);
  for (int i = 0; i < window_w * window_h; ++i) q.cells.push_back(PatternCell::concrete(cells[i]));
  for (const Pattern& p : allowed) {
    if (pattern_matches(p, q, alphabet)) return true;
  }
  return false;
}

bool PatternLibrary::admits(const Pattern& window, const Alphabet& alphabet) const {
  if (window.width != window_w || window.height != window_h) {
    throw std::invalid_argument("PatternLibrary::admits: window size mismatch");
  }
  if (!window.concrete()) throw std::invalid_argument("PatternLibrary::admits: window has wildcards");
  std::vector<State> cells;
  cells.reserve(window.cells.size());
  for (const auto& c : window.cells) cells.push_back(c.state);
  return admits(cells.data(), alphabet);
}

bool PatternLibrary::grammar_admits(const State* cells, const Alphabet& alphabet) const {
  const InteriorGrammar& g = *grammar;
  auto is_interior = [&](State s) {
    return std::binary_search(g.interior.begin(), g.interior.end(), s);
  };
  auto in = [](const std::vector<State>& set, State s) {
    return std::binary_search(set.begin(), set.end(), s);
  };
  auto is_free = [&](State s) { return alphabet.in_class(kFreeClass, s); };

  // Banned states fail wherever they appear.
  for (int i = 0; i < 9; ++i) {
    if (in(g.banned, cells[i])) return false;
  }
  // Geometry: project interior states to 1, pass everything else through; the
  // result must be admissible for the base library. Plain 1 is typically in
  // the banned list of a compiled grammar, so it never reaches this point.
  State projected[9];
  for (int i = 0; i < 9; ++i) {
    State s = cells[i];
    projected[i] = is_interior(s) ? fstate::One : s;
  }
  if (!g.base->admits(projected, alphabet)) return false;

  // Center-relative adjacency constraints. Window indices, top row first:
  //   0 1 2
  //   3 4 5
  //   6 7 8
  const State c = cells[4];
  if (is_free(c) || !is_interior(c)) return true;  // frame/free centers: geometry only

  const State left = cells[3], right = cells[5], above = cells[1], below = cells[7];
  // Vertical pairs may fall back on the padding relaxation, which also looks
  // at the cell left of the pair's upper state.
  auto vpair = [&](State lo, State hi, State left_of_hi) {
    if (g.v_ok.count(InteriorGrammar::pack(lo, hi))) return true;
    return g.pad_below.count(InteriorGrammar::pack(lo, hi)) > 0 &&
           (left_of_hi == fstate::LeftEdge || in(g.pad_states, left_of_hi));
  };
  // Interior-interior pairs must be allowed.
  if (is_interior(left) && !g.h_ok.count(InteriorGrammar::pack(left, c))) return false;
  if (is_interior(right) && !g.h_ok.count(InteriorGrammar::pack(c, right))) return false;
  if (is_interior(below) && !vpair(below, c, left)) return false;
  if (is_interior(above) && !vpair(c, above, cells[0])) return false;
  // Frame-adjacent cells obey the positional tables.
  if (left == fstate::LeftEdge && !g.left_col.empty() && !in(g.left_col, c)) return false;
  if (right == fstate::RightEdge && !g.right_col.empty() && !in(g.right_col, c)) return false;
  const State down_left = cells[6], up_right = cells[2];
  // The bottom-row restriction is lifted in the window that contains the
  // bottom-left corner: that cell is governed by the seed rule instead.
  if (below == fstate::BottomEdge && down_left != fstate::BottomLeft && !g.bottom_row.empty() &&
      !in(g.bottom_row, c)) {
    return false;
  }
  if (above == fstate::TopEdge && !g.top_row.empty() && !in(g.top_row, c)) return false;
  // Seed: the cell diagonally up-right of the bottom-left corner is forced.
  // (The seed state may legitimately recur elsewhere in the run.)
  if (g.seed && down_left == fstate::BottomLeft && c != *g.seed) return false;
  // Completion marker: the cell diagonally down-left of the top-right corner.
  if (!g.top_right.empty() && up_right == fstate::TopRight && !in(g.top_right, c)) return false;
  return true;
}

PatternLibrary sigma_af(int generation_bound, int min_interior) {
  if (min_interior < 1 || generation_bound < min_interior) {
    throw std::invalid_argument("sigma_af: bad interior bounds");
  }
  const AlphabetPtr alphabet = f_alphabet();
  std::set<std::array<State, 9>> keys;
  keys.insert({kSentinel, kSentinel, kSentinel, kSentinel, kSentinel, kSentinel, kSentinel,
               kSentinel, kSentinel});  // pure background window
  for (int w = min_interior; w <= generation_bound; ++w) {
    for (int h = min_interior; h <= generation_bound; ++h) {
      Configuration x(alphabet, fstate::Zero);
      paint_obstacle(x, {0, 0}, w, h);
      // Window centers one cell beyond the footprint see partial frames too.
      for (int cx = -2; cx <= w + 2; ++cx) {
        for (int cy = -2; cy <= h + 2; ++cy) {
          std::array<State, 9> key{};
          State win[9];
          window3(x, {cx, cy}, win);
          for (int i = 0; i < 9; ++i) {
            key[i] = alphabet->in_class(kObstacleClass, win[i]) ? win[i] : kSentinel;
          }
          keys.insert(key);
        }
      }
    }
  }
  PatternLibrary lib;
  lib.name = "obstacle-fields";
  lib.window_w = 3;
  lib.window_h = 3;
  for (const auto& key : keys) {
    Pattern p;
    p.width = 3;
    p.height = 3;
    for (int i = 0; i < 9; ++i) {
      p.cells.push_back(key[i] == kSentinel ? PatternCell::of_class(kFreeClass)
                                            : PatternCell::concrete(key[i]));
    }
    lib.allowed.push_back(std::move(p));
  }
  lib.build_index(*alphabet);
  return lib;
}

Result<std::vector<Position>> violations(const Configuration& x, const PatternLibrary& lib) {
  const Alphabet& alphabet = *x.alphabet();
  {
    State blank[9];
    for (auto& s : blank) s = x.background();
    if (!lib.admits(blank, alphabet)) {
      return Error{"violations: all-background window is inadmissible"};
    }
  }
  std::vector<Position> out;
  Position lo, hi;
  if (!x.bounds(lo, hi)) return out;
  for (std::int32_t cy = lo.y - 1; cy <= hi.y + 1; ++cy) {
    for (std::int32_t cx = lo.x - 1; cx <= hi.x + 1; ++cx) {
      State win[9];
      window3(x, {cx, cy}, win);
      if (!lib.admits(win, alphabet)) out.push_back({cx, cy});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Result<std::vector<Obstacle>> decompose_obstacles(const Configuration& x) {
  const Alphabet& alphabet = *x.alphabet();
  const bool has_tiles = alphabet.has_class("tile");
  // Collect obstacle-class cells and flood-fill 4-connected regions.
  std::unordered_set<Position, PositionHash> cells;
  for (const auto& [p, s] : x.support()) {
    if (alphabet.in_class(kObstacleClass, s)) cells.insert(p);
  }
  std::vector<std::vector<Position>> regions;
  std::unordered_set<Position, PositionHash> seen;
  for (const auto& start : cells) {
    if (seen.count(start)) continue;
    std::vector<Position> region, stack{start};
    seen.insert(start);
    while (!stack.empty()) {
      Position p = stack.back();
      stack.pop_back();
      region.push_back(p);
      for (Position n : {Position{p.x + 1, p.y}, Position{p.x - 1, p.y}, Position{p.x, p.y + 1},
                         Position{p.x, p.y - 1}}) {
        if (cells.count(n) && !seen.count(n)) {
          seen.insert(n);
          stack.push_back(n);
        }
      }
    }
    regions.push_back(std::move(region));
  }
  // Certify each region as a framed rectangle.
  std::vector<Obstacle> out;
  for (const auto& region : regions) {
    Position lo = region[0], hi = region[0];
    for (Position p : region) {
      lo.x = std::min(lo.x, p.x);
      lo.y = std::min(lo.y, p.y);
      hi.x = std::max(hi.x, p.x);
      hi.y = std::max(hi.y, p.y);
    }
    const int W = hi.x - lo.x + 1, H = hi.y - lo.y + 1;
    if (W < 3 || H < 3) {
      return Error::at("obstacle region smaller than minimal footprint", lo.x, lo.y);
    }
    if (static_cast<int>(region.size()) != W * H) {
      return Error::at("obstacle region is not a filled rectangle", lo.x, lo.y);
    }
    bool interior_all_one = true, interior_all_tile = true;
    for (int dy = 0; dy < H; ++dy) {
      for (int dx = 0; dx < W; ++dx) {
        Position p{lo.x + dx, lo.y + dy};
        State want = obstacle_footprint_state(dx, dy, W, H);
        State got = x.get(p);
        if (want == fstate::One) {
          // Interior: a bare 1 or (for compiled alphabets) any tile state.
          if (got != fstate::One) interior_all_one = false;
          if (!(has_tiles && alphabet.in_class("tile", got))) interior_all_tile = false;
          if (got != fstate::One && !(has_tiles && alphabet.in_class("tile", got))) {
            return Error::at("obstacle interior holds a frame state", p.x, p.y);
          }
        } else if (got != want) {
          return Error::at("obstacle frame glyph out of place", p.x, p.y);
        }
      }
    }
    Obstacle ob;
    ob.interior_origin = {lo.x + 1, lo.y + 1};
    ob.interior_w = W - 2;
    ob.interior_h = H - 2;
    ob.kind = interior_all_one ? Obstacle::Kind::Plain
                               : (interior_all_tile ? Obstacle::Kind::Tm : Obstacle::Kind::Plain);
    if (!interior_all_one && !interior_all_tile) {
      return Error::at("obstacle interior mixes tiles and 1s", ob.interior_origin.x,
                       ob.interior_origin.y);
    }
    out.push_back(ob);
  }
  // Spacing: no two distinct obstacles within Chebyshev gap < 3 (otherwise
  // some position would see both within distance 1).
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      Position alo = out[i].footprint_lo(), ahi = out[i].footprint_hi();
      Position blo = out[j].footprint_lo(), bhi = out[j].footprint_hi();
      int gx = std::max({blo.x - ahi.x, alo.x - bhi.x, 0});
      int gy = std::max({blo.y - ahi.y, alo.y - bhi.y, 0});
      if (std::max(gx, gy) < 3) {
        return Error::at("obstacles closer than the minimal spacing", blo.x, blo.y);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Obstacle& a, const Obstacle& b) {
    return a.interior_origin < b.interior_origin;
  });
  return out;
}

std::string library_listing(const PatternLibrary& lib, const Alphabet& alphabet) {
  std::string out = "library " + lib.name + " " + std::to_string(lib.window_w) + "x" +
                    std::to_string(lib.window_h) + " patterns " +
                    std::to_string(lib.allowed.size()) + "\n";
  for (const Pattern& p : lib.allowed) {
    for (int r = 0; r < p.height; ++r) {
      for (int c = 0; c < p.width; ++c) {
        if (c) out += ' ';
        const PatternCell& cell = p.at(r, c);
        out += cell.wildcard ? ("<" + cell.cls + ">") : alphabet.state_name(cell.state);
      }
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

}  // namespace obsca
