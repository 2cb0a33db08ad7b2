#include "obsca/tiles.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace obsca {

int TileSet::find(const std::string& name) const {
  for (int i = 0; i < size(); ++i) {
    if (names[i] == name) return i;
  }
  return -1;
}

Tiling tiles_rect(const TileSet& t, int w, int h) {
  if (w < 1 || h < 1) throw std::invalid_argument("tiles_rect: dimensions must be >= 1");
  Tiling g;
  g.width = w;
  g.height = h;
  const int n_tiles = t.size();
  const int n_cells = w * h;
  std::vector<int> cells(n_cells, -1);

  // Per-tile successor lists keep the inner loop tight.
  std::vector<std::vector<int>> right_of(n_tiles), above_of(n_tiles);
  for (int a = 0; a < n_tiles; ++a) {
    for (int b = 0; b < n_tiles; ++b) {
      if (t.h_ok.count(TileSet::pack(a, b))) right_of[a].push_back(b);
      if (t.v_ok.count(TileSet::pack(a, b))) above_of[a].push_back(b);
    }
  }

  // Depth-first over cells in scan order (bottom row first, left to right),
  // trying tiles in id order: the first full assignment found is the
  // lexicographically least witness.
  int i = 0;
  while (true) {
    const int r = i / w, c = i % w;
    const int left = c > 0 ? cells[i - 1] : -1;
    const int below = r > 0 ? cells[i - w] : -1;
    int cand = cells[i] + 1;  // resume after the tile tried last (-1 on entry)
    int chosen = -1;
    for (; cand < n_tiles; ++cand) {
      if (left >= 0 && !t.h_ok.count(TileSet::pack(left, cand))) continue;
      if (below >= 0 && !t.v_ok.count(TileSet::pack(below, cand))) continue;
      // Dead-end pruning: a tile with no successor can only sit on the far
      // edge of its axis.
      if (c + 1 < w && right_of[cand].empty()) continue;
      if (r + 1 < h && above_of[cand].empty()) continue;
      chosen = cand;
      break;
    }
    if (chosen < 0) {
      cells[i] = -1;  // reset for a future visit
      if (i == 0) return g;  // untilable
      --i;
      continue;  // backtrack: the previous cell resumes from its last choice
    }
    cells[i] = chosen;
    if (++i == n_cells) {
      g.tilable = true;
      g.cells = std::move(cells);
      return g;
    }
  }
}

Tiling tiles_square(const TileSet& t, int n) {
  if (n < 1) throw std::invalid_argument("tiles_square: n must be >= 1");
  return tiles_rect(t, n, n);
}

bool tiling_valid(const TileSet& t, const Tiling& g) {
  if (!g.tilable) return false;
  if (static_cast<int>(g.cells.size()) != g.width * g.height) return false;
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) {
      const int id = g.cells[r * g.width + c];
      if (id < 0 || id >= t.size()) return false;
      if (c + 1 < g.width && !t.h_ok.count(TileSet::pack(id, g.cells[r * g.width + c + 1]))) {
        return false;
      }
      if (r + 1 < g.height && !t.v_ok.count(TileSet::pack(id, g.cells[(r + 1) * g.width + c]))) {
        return false;
      }
    }
  }
  return true;
}

std::string serialize_tiles(const TileSet& t) {
  std::ostringstream out;
  out << "tiles v1\n";
  out << "tiles:";
  for (const std::string& n : t.names) out << " " << n;
  out << "\n";
  auto sorted_pairs = [&](const std::unordered_set<std::uint32_t>& set) {
    std::vector<std::uint32_t> v(set.begin(), set.end());
    std::sort(v.begin(), v.end());
    return v;
  };
  for (std::uint32_t p : sorted_pairs(t.h_ok)) {
    out << "h: " << t.names[p >> 16] << " " << t.names[p & 0xffff] << "\n";
  }
  for (std::uint32_t p : sorted_pairs(t.v_ok)) {
    out << "v: " << t.names[p >> 16] << " " << t.names[p & 0xffff] << "\n";
  }
  return out.str();
}

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

Error tiles_err(int line_no, const std::string& what) {
  return Error{"tiles line " + std::to_string(line_no) + ": " + what};
}

}  // namespace

Result<TileSet> parse_tiles(const std::string& text) {
  TileSet t;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool saw_magic = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> tok = tokens_of(line);
    if (tok.empty()) continue;
    if (!saw_magic) {
      if (tok.size() != 2 || tok[0] != "tiles" || tok[1] != "v1") {
        return tiles_err(line_no, "expected header 'tiles v1'");
      }
      saw_magic = true;
      continue;
    }
    if (tok[0] == "tiles:") {
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (t.find(tok[i]) >= 0) return tiles_err(line_no, "duplicate tile '" + tok[i] + "'");
        t.names.push_back(tok[i]);
      }
      continue;
    }
    if (tok[0] == "h:" || tok[0] == "v:") {
      if (tok.size() != 3) return tiles_err(line_no, "expected '" + tok[0] + " <tile> <tile>'");
      const int a = t.find(tok[1]), b = t.find(tok[2]);
      if (a < 0) return tiles_err(line_no, "unknown tile '" + tok[1] + "'");
      if (b < 0) return tiles_err(line_no, "unknown tile '" + tok[2] + "'");
      (tok[0] == "h:" ? t.h_ok : t.v_ok).insert(TileSet::pack(a, b));
      continue;
    }
    return tiles_err(line_no, "unrecognized directive '" + tok[0] + "'");
  }
  if (!saw_magic) return Error{"tiles: empty input, expected header 'tiles v1'"};
  if (t.names.empty()) return Error{"tiles: no tiles declared"};
  return t;
}

}  // namespace obsca
