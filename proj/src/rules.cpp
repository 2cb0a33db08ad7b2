#include "obsca/rules.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace obsca {

// --- tokens ------------------------------------------------------------------------

char tok_char(Tok t) {
  switch (t) {
    case Tok::Free: return '*';
    case Tok::Obst: return '#';
    case Tok::Zero: return '0';
    case Tok::ZeroOrObst: return '%';
    case Tok::Any: return '?';
    case Tok::LitU: return 'U';
    case Tok::LitD: return 'D';
    case Tok::Keep: return 'x';
  }
  return '?';
}

Tok tok_of_char(char c) {
  switch (c) {
    case '*': return Tok::Free;
    case '#': return Tok::Obst;
    case '0': return Tok::Zero;
    case '%': return Tok::ZeroOrObst;
    case '?': return Tok::Any;
    case 'U': return Tok::LitU;
    case 'D': return Tok::LitD;
    case 'x': return Tok::Keep;
  }
  throw std::invalid_argument(std::string("unknown guard token '") + c + "'");
}

// --- the rule family of the obstacle/particle automaton -----------------------------
//
// Stationarity of obstacle cells surrounded by enough obstacle material
// (rules 1-3), upward particle motion along left walls with the turns at
// both ends of a wall (rules 4-9), the mirrored downward motion along right
// walls (rules 10-15), and locking of vertical U/D pairs (rules 16-17).
// First match wins; anything not matched by a rule (and not killed by the
// admissibility stage) becomes 0.

const std::vector<SourceRule>& f_source_rules() {
  static const std::vector<SourceRule> rules = {
      {"* * *  # x *  # # *", 'x', true},   // straight edge piece
      {"# # *  # x *  # # *", 'x', true},   // corner piece
      {"# # #  # x #  # # #", 'x', false},  // interior piece
      {"% 0 0  # 0 0  # U 0", 'U', false},  // climb: wall continues above
      {"0 0 0  0 0 0  # U 0", 'U', false},  // climb past the wall top
      {"0 0 0  0 0 U  # # ?", 'U', false},  // turn left over the top corner
      {"0 0 0  0 0 U  0 % #", 'U', false},  // drift left above a top edge
      {"0 U %  0 0 #  0 0 #", 'U', false},  // re-attach on the right wall
      {"0 U #  0 0 #  0 0 D", 'U', false},  // U meets the descending lane
      {"# D 0  # 0 0  % 0 0", 'D', false},  // descend: wall continues below
      {"# D 0  0 0 0  0 0 0", 'D', false},  // descend past the wall bottom
      {"# # ?  0 0 D  0 0 0", 'D', false},  // turn right under the bottom corner
      {"0 % #  0 0 D  0 0 0", 'D', false},  // drift right below a bottom edge
      {"0 0 #  0 0 #  0 D %", 'D', false},  // re-attach on the left wall
      {"0 0 U  0 0 #  0 D #", 'D', false},  // D meets the ascending lane
      {"% % U  % 0 D  % % %", 'D', false},  // locked pair, lower half
      {"% % %  % 0 U  % % D", 'U', false},  // locked pair, upper half
  };
  return rules;
}

std::array<Tok, 9> rot90(const std::array<Tok, 9>& g) {
  std::array<Tok, 9> out{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out[r * 3 + c] = g[(2 - c) * 3 + r];
  return out;
}

static std::array<Tok, 9> parse_guard_cells(const char* text) {
  std::array<Tok, 9> cells{};
  int n = 0;
  for (const char* p = text; *p; ++p) {
    if (*p == ' ' || *p == '\t') continue;
    if (n >= 9) throw std::invalid_argument("guard has more than 9 tokens");
    cells[n++] = tok_of_char(*p);
  }
  if (n != 9) throw std::invalid_argument("guard has fewer than 9 tokens");
  return cells;
}

std::vector<Guard> expand_guards(const std::vector<SourceRule>& rules) {
  std::vector<Guard> out;
  for (const auto& sr : rules) {
    Guard g;
    g.cells = parse_guard_cells(sr.guard);
    if (sr.out == 'x') {
      g.keep = true;
    } else if (sr.out == 'U') {
      g.out = fstate::U;
    } else if (sr.out == 'D') {
      g.out = fstate::D;
    } else {
      throw std::invalid_argument("guard output must be x, U or D");
    }
    out.push_back(g);
    if (sr.rot) {
      Guard r = g;
      for (int k = 0; k < 3; ++k) {
        r.cells = rot90(r.cells);
        r.rotated = true;
        out.push_back(r);
      }
    }
  }
  return out;
}

// --- block layer ---------------------------------------------------------------------

State BlockLayer::analog(State s) const {
  if (!is_e(s)) return s;
  static const State glyph[9] = {fstate::TopLeft,    fstate::TopEdge,  fstate::TopRight,
                                 fstate::LeftEdge,   fstate::One,      fstate::RightEdge,
                                 fstate::BottomLeft, fstate::BottomEdge,
                                 fstate::BottomRight};
  return glyph[role_of(s)];
}

const std::vector<Position>& BlockLayer::outside_offsets(int role) {
  // y up; role layout matches a 3x3 keypad read top row first.
  static const std::vector<Position> tables[9] = {
      /*0 tl*/ {{-1, 1}, {0, 1}, {1, 1}, {-1, 0}, {-1, -1}},
      /*1 top*/ {{-1, 1}, {0, 1}, {1, 1}},
      /*2 tr*/ {{-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}},
      /*3 left*/ {{-1, 1}, {-1, 0}, {-1, -1}},
      /*4 dash*/ {},
      /*5 right*/ {{1, 1}, {1, 0}, {1, -1}},
      /*6 bl*/ {{-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}},
      /*7 bottom*/ {{-1, -1}, {0, -1}, {1, -1}},
      /*8 br*/ {{1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}},
  };
  return tables[role];
}

const std::vector<Position>& BlockLayer::inside_offsets(int role) {
  static std::vector<Position> tables[9];
  static const bool built = [] {
    const Position all[8] = {{-1, 1}, {0, 1},  {1, 1},  {-1, 0},
                             {1, 0},  {-1, -1}, {0, -1}, {1, -1}};
    for (int role = 0; role < 9; ++role) {
      const auto& out = outside_offsets(role);
      for (const Position& p : all)
        if (std::find(out.begin(), out.end(), p) == out.end())
          tables[role].push_back(p);
    }
    return true;
  }();
  (void)built;
  return tables[role];
}

static int win5_index(Position offset) {
  return (2 - offset.y) * 5 + (2 + offset.x);
}

State BlockLayer::update_e_center(const State* w) const {
  const State center = w[12];
  const int role = role_of(center);

  // Disconnected block material in sight: flood from the center through
  // E-states (4-connected within the 5x5) and require it to reach them all.
  {
    bool e_at[25];
    for (int i = 0; i < 25; ++i) e_at[i] = is_e(w[i]);
    bool seen[25] = {false};
    int stack[25], top = 0;
    stack[top++] = 12;
    seen[12] = true;
    while (top > 0) {
      const int i = stack[--top];
      const int r = i / 5, c = i % 5;
      const int next[4] = {r > 0 ? i - 5 : -1, r < 4 ? i + 5 : -1,
                           c > 0 ? i - 1 : -1, c < 4 ? i + 1 : -1};
      for (int j : next)
        if (j >= 0 && e_at[j] && !seen[j]) {
          seen[j] = true;
          stack[top++] = j;
        }
    }
    for (int i = 0; i < 25; ++i)
      if (e_at[i] && !seen[i]) return fstate::Zero;
  }

  // Inside errors: every inside neighbor must carry block material, every
  // all-E 2x2 window containing the center must be a boundary-ring window,
  // and tile adjacencies toward inside neighbors must be allowed.
  for (const Position& d : inside_offsets(role))
    if (!is_e(w[win5_index(d)])) return fstate::Zero;

  static const Position tl_offsets[4] = {{-1, 1}, {0, 1}, {-1, 0}, {0, 0}};
  for (const Position& tl : tl_offsets) {
    const State a = w[win5_index(tl)];
    const State b = w[win5_index({tl.x + 1, tl.y})];
    const State c = w[win5_index({tl.x, tl.y - 1})];
    const State d = w[win5_index({tl.x + 1, tl.y - 1})];
    if (!is_e(a) || !is_e(b) || !is_e(c) || !is_e(d)) continue;
    const std::uint16_t key =
        pack_roles(role_of(a), role_of(b), role_of(c), role_of(d));
    if (!std::binary_search(x2_ok.begin(), x2_ok.end(), key))
      return fstate::Zero;
  }

  const auto pair_ok = [&](const std::vector<std::uint32_t>& table, State lo,
                           State hi) {
    const std::uint32_t key =
        (static_cast<std::uint32_t>(tile_of(lo)) << 16) |
        static_cast<std::uint32_t>(tile_of(hi));
    return std::binary_search(table.begin(), table.end(), key);
  };
  const auto& ins = inside_offsets(role);
  for (const Position& d : ins) {
    if (d.x != 0 && d.y != 0) continue;  // 4-neighbors only
    const State n = w[win5_index(d)];
    if (!is_e(n)) continue;  // already rejected above; keep the guard local
    bool ok = true;
    if (d.y == 0)
      ok = d.x < 0 ? pair_ok(h_ok, n, center) : pair_ok(h_ok, center, n);
    else
      ok = d.y < 0 ? pair_ok(v_ok, n, center) : pair_ok(v_ok, center, n);
    if (!ok) return fstate::Zero;
  }

  // Forbidden outside pairs: the outward neighborhood must be free space.
  for (const Position& d : outside_offsets(role)) {
    const State s = w[win5_index(d)];
    if (s != fstate::Zero && s != fstate::U && s != fstate::D)
      return fstate::Zero;
  }

  return center;
}

// --- FStyleRule -----------------------------------------------------------------------

FStyleRule::FStyleRule(AlphabetPtr alphabet, PatternLibrary case1,
                       std::vector<Guard> guards, ViolationScope scope,
                       std::optional<BlockLayer> block)
    : alphabet_(std::move(alphabet)),
      case1_(std::move(case1)),
      guards_(std::move(guards)),
      scope_(scope),
      block_(std::move(block)) {
  case1_.build_index(*alphabet_);
  const std::size_t words = (alphabet_->size() + 63) / 64;
  for (auto& m : masks_) m.assign(words, 0);
  const auto set_bit = [&](std::vector<std::uint64_t>& m, State s) {
    m[s >> 6] |= std::uint64_t(1) << (s & 63);
  };
  const auto set_class = [&](std::vector<std::uint64_t>& m, const std::string& cls) {
    if (!alphabet_->has_class(cls)) return;
    for (State s : alphabet_->class_members(cls)) set_bit(m, s);
  };
  set_class(masks_[static_cast<int>(Tok::Free)], kFreeClass);
  set_class(masks_[static_cast<int>(Tok::Obst)], kObstacleClass);
  set_class(masks_[static_cast<int>(Tok::Keep)], kObstacleClass);
  set_bit(masks_[static_cast<int>(Tok::Zero)], fstate::Zero);
  set_bit(masks_[static_cast<int>(Tok::ZeroOrObst)], fstate::Zero);
  set_class(masks_[static_cast<int>(Tok::ZeroOrObst)], kObstacleClass);
  for (std::size_t w = 0; w < words; ++w)
    masks_[static_cast<int>(Tok::Any)][w] = ~std::uint64_t(0);
  set_bit(masks_[static_cast<int>(Tok::LitU)], fstate::U);
  set_bit(masks_[static_cast<int>(Tok::LitD)], fstate::D);
}

bool FStyleRule::tok_match(Tok t, State s) const {
  const auto& m = masks_[static_cast<int>(t)];
  return (m[s >> 6] >> (s & 63)) & 1;
}

bool FStyleRule::guard_matches(const Guard& g, const State* w3) const {
  for (int i = 0; i < 9; ++i)
    if (!tok_match(g.cells[i], w3[i])) return false;
  return true;
}

bool FStyleRule::center3_admissible(const State* window, int cx, int cy) const {
  State t[9];
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      State s = window[(1 - cy + r) * 5 + (1 + cx + c)];
      if (block_) s = block_->analog(s);
      t[r * 3 + c] = s;
    }
  return case1_.admits(t, *alphabet_);
}

State FStyleRule::apply(const State* window) const {
  const State center = window[12];
  if (block_ && block_->is_e(center)) return block_->update_e_center(window);

  if (scope_ == ViolationScope::CenterWindow) {
    if (!center3_admissible(window, 0, 0)) return fstate::Zero;
  } else {
    for (int cy = -1; cy <= 1; ++cy)
      for (int cx = -1; cx <= 1; ++cx)
        if (!center3_admissible(window, cx, cy)) return fstate::Zero;
  }

  State w3[9];
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) w3[r * 3 + c] = window[(r + 1) * 5 + (c + 1)];
  for (const Guard& g : guards_) {
    if (guard_matches(g, w3)) return g.keep ? center : g.out;
  }
  return fstate::Zero;
}

std::shared_ptr<const FStyleRule> f_rule_table(ViolationScope scope) {
  static const auto make = [](ViolationScope sc) {
    auto rule = std::make_shared<FStyleRule>(f_alphabet(), sigma_af(),
                                             expand_guards(f_source_rules()), sc);
    return std::shared_ptr<const FStyleRule>(rule);
  };
  static const std::shared_ptr<const FStyleRule> center = make(ViolationScope::CenterWindow);
  static const std::shared_ptr<const FStyleRule> any = make(ViolationScope::AnyWindowIn5x5);
  return scope == ViolationScope::CenterWindow ? center : any;
}

// --- ca-rules v1 -----------------------------------------------------------------------

static void write_names(std::ostringstream& out, const char* key,
                        const std::vector<State>& states, const Alphabet& a) {
  out << key << ':';
  if (states.empty()) {
    out << " -";
  } else {
    for (State s : states) out << ' ' << a.state_name(s);
  }
  out << '\n';
}

std::string serialize_rules(const FStyleRule& rule) {
  const Alphabet& a = *rule.alphabet();
  std::ostringstream out;
  out << "ca-rules v1\n";
  out << "name: " << rule.name << '\n';
  out << "origin: " << rule.origin << '\n';
  out << "radius: " << rule.radius() << '\n';
  out << "scope: "
      << (rule.scope() == ViolationScope::CenterWindow ? "center-window"
                                                       : "any-window")
      << '\n';
  out << "states: " << a.size() << '\n';
  for (State s = 0; s < a.size(); ++s)
    out << "state: " << a.state_name(s) << ' ' << a.display(s) << '\n';
  for (const std::string& cls : a.class_names()) {
    out << "class: " << cls;
    for (State s : a.class_members(cls)) out << ' ' << a.state_name(s);
    out << '\n';
  }
  out << "background: " << a.state_name(rule.background()) << '\n';

  const PatternLibrary& lib = rule.case1_library();
  if (lib.grammar) {
    const InteriorGrammar& g = *lib.grammar;
    out << "library: grammar\n";
    write_names(out, "interior", g.interior, a);
    write_names(out, "banned", g.banned, a);
    const auto write_pairs = [&](const char* key,
                                 const std::vector<std::uint32_t>& packed) {
      for (std::uint32_t p : packed)
        out << key << ": " << a.state_name(static_cast<State>(p >> 16)) << ' '
            << a.state_name(static_cast<State>(p & 0xffff)) << '\n';
    };
    std::vector<std::uint32_t> hs(g.h_ok.begin(), g.h_ok.end());
    std::vector<std::uint32_t> vs(g.v_ok.begin(), g.v_ok.end());
    std::sort(hs.begin(), hs.end());
    std::sort(vs.begin(), vs.end());
    write_pairs("hpair", hs);
    write_pairs("vpair", vs);
    write_names(out, "leftcol", g.left_col, a);
    write_names(out, "rightcol", g.right_col, a);
    write_names(out, "bottomrow", g.bottom_row, a);
    write_names(out, "toprow", g.top_row, a);
    out << "seed: " << (g.seed ? a.state_name(*g.seed) : std::string("-")) << '\n';
    write_names(out, "topright", g.top_right, a);
    write_names(out, "padstate", g.pad_states, a);
    std::vector<std::uint32_t> pads(g.pad_below.begin(), g.pad_below.end());
    std::sort(pads.begin(), pads.end());
    write_pairs("padbelow", pads);
  } else {
    out << "library: obstacle-fields\n";
  }

  out << "guards: " << rule.guards().size() << '\n';
  for (const Guard& g : rule.guards()) {
    out << "guard:";
    for (Tok t : g.cells) out << ' ' << tok_char(t);
    out << " -> " << (g.keep ? 'x' : (g.out == fstate::U ? 'U' : 'D')) << '\n';
  }

  if (rule.block_layer()) {
    const BlockLayer& b = *rule.block_layer();
    out << "block: " << b.tile_count << ' ' << b.first_e << '\n';
    for (std::uint32_t p : b.h_ok)
      out << "thpair: " << (p >> 16) << ' ' << (p & 0xffff) << '\n';
    for (std::uint32_t p : b.v_ok)
      out << "tvpair: " << (p >> 16) << ' ' << (p & 0xffff) << '\n';
    for (std::uint16_t q : b.x2_ok)
      out << "x2: " << ((q >> 12) & 15) << ' ' << ((q >> 8) & 15) << ' '
          << ((q >> 4) & 15) << ' ' << (q & 15) << '\n';
  }
  return out.str();
}

namespace {

struct LineReader {
  std::istringstream in;
  int line_no = 0;
  std::string line;
  bool pending = false;

  explicit LineReader(const std::string& text) : in(text) {}

  bool next() {
    if (pending) {
      pending = false;
      return true;
    }
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      return true;
    }
    return false;
  }
  void push_back() { pending = true; }

  [[noreturn]] void fail(const std::string& what) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": " + what);
  }
};

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// "key: value" -> value tokens; fails when the key differs.
std::vector<std::string> expect_kv(LineReader& r, const std::string& key) {
  if (!r.next()) r.fail("expected '" + key + ":'");
  auto toks = split_ws(r.line);
  if (toks.empty() || toks[0] != key + ":")
    r.fail("expected '" + key + ":', got '" + r.line + "'");
  toks.erase(toks.begin());
  return toks;
}

}  // namespace

Result<std::shared_ptr<const FStyleRule>> parse_rules(const std::string& text) {
  try {
    LineReader r(text);
    if (!r.next() || r.line != "ca-rules v1") r.fail("expected header 'ca-rules v1'");

    const auto one = [&](const std::string& key) {
      auto v = expect_kv(r, key);
      if (v.size() != 1) r.fail("'" + key + ":' takes one value");
      return v[0];
    };
    // name/origin are free text (origins describe compiler inputs).
    const auto rest = [&](const std::string& key) {
      if (!r.next()) r.fail("expected '" + key + ":'");
      const std::string prefix = key + ":";
      if (r.line.rfind(prefix, 0) != 0) r.fail("expected '" + key + ":', got '" + r.line + "'");
      std::string v = r.line.substr(prefix.size());
      const std::size_t at = v.find_first_not_of(' ');
      return at == std::string::npos ? std::string() : v.substr(at);
    };

    const std::string name = rest("name");
    const std::string origin = rest("origin");
    const int radius = std::stoi(one("radius"));
    if (radius != 2) r.fail("only radius 2 is supported");
    const std::string scope_word = one("scope");
    ViolationScope scope;
    if (scope_word == "center-window")
      scope = ViolationScope::CenterWindow;
    else if (scope_word == "any-window")
      scope = ViolationScope::AnyWindowIn5x5;
    else
      r.fail("scope must be center-window or any-window");

    const int n_states = std::stoi(one("states"));
    if (n_states < 1 || n_states > 60000) r.fail("unreasonable state count");
    auto alpha = std::make_shared<Alphabet>(name);
    for (int i = 0; i < n_states; ++i) {
      auto v = expect_kv(r, "state");
      if (v.size() != 2 || v[1].size() != 1)
        r.fail("state lines are 'state: <name> <char>'");
      alpha->add_state(v[0], v[1][0]);
    }
    std::vector<std::pair<std::string, std::vector<std::string>>> classes;
    while (r.next()) {
      auto toks = split_ws(r.line);
      if (toks.empty() || toks[0] != "class:") {
        r.push_back();
        break;
      }
      if (toks.size() < 2) r.fail("class line needs a name");
      classes.emplace_back(toks[1],
                           std::vector<std::string>(toks.begin() + 2, toks.end()));
    }
    const auto id_of = [&](const std::string& n) -> State {
      for (State s = 0; s < alpha->size(); ++s)
        if (alpha->state_name(s) == n) return s;
      r.fail("unknown state name '" + n + "'");
    };
    for (const auto& [cls, members] : classes) {
      std::vector<State> ids;
      for (const auto& m : members) ids.push_back(id_of(m));
      alpha->add_class(cls, ids);
    }
    AlphabetPtr alphabet = alpha;

    const std::string bg_name = one("background");
    if (id_of(bg_name) != fstate::Zero) r.fail("background must be the zero state");

    const auto names_of = [&](const std::vector<std::string>& toks) {
      std::vector<State> out;
      if (toks.size() == 1 && toks[0] == "-") return out;
      for (const auto& t : toks) out.push_back(id_of(t));
      std::sort(out.begin(), out.end());
      return out;
    };

    const std::string lib_kind = one("library");
    PatternLibrary lib;
    if (lib_kind == "obstacle-fields") {
      lib = sigma_af();
    } else if (lib_kind == "grammar") {
      InteriorGrammar g;
      g.base = std::make_shared<PatternLibrary>(sigma_af());
      g.interior = names_of(expect_kv(r, "interior"));
      g.banned = names_of(expect_kv(r, "banned"));
      while (r.next()) {
        auto toks = split_ws(r.line);
        if (toks.empty() || (toks[0] != "hpair:" && toks[0] != "vpair:")) {
          r.push_back();
          break;
        }
        if (toks.size() != 3) r.fail("pair lines are '<key>: <a> <b>'");
        const std::uint32_t key =
            (static_cast<std::uint32_t>(id_of(toks[1])) << 16) |
            static_cast<std::uint32_t>(id_of(toks[2]));
        (toks[0] == "hpair:" ? g.h_ok : g.v_ok).insert(key);
      }
      g.left_col = names_of(expect_kv(r, "leftcol"));
      g.right_col = names_of(expect_kv(r, "rightcol"));
      g.bottom_row = names_of(expect_kv(r, "bottomrow"));
      g.top_row = names_of(expect_kv(r, "toprow"));
      const std::string seed = one("seed");
      if (seed != "-") g.seed = id_of(seed);
      g.top_right = names_of(expect_kv(r, "topright"));
      g.pad_states = names_of(expect_kv(r, "padstate"));
      while (r.next()) {
        auto toks = split_ws(r.line);
        if (toks.empty() || toks[0] != "padbelow:") {
          r.push_back();
          break;
        }
        if (toks.size() != 3) r.fail("pair lines are '<key>: <a> <b>'");
        g.pad_below.insert((static_cast<std::uint32_t>(id_of(toks[1])) << 16) |
                           static_cast<std::uint32_t>(id_of(toks[2])));
      }
      lib.name = "compiled-grammar";
      lib.grammar = std::move(g);
    } else {
      r.fail("unknown library kind '" + lib_kind + "'");
    }

    const int n_guards = std::stoi(one("guards"));
    std::vector<Guard> guards;
    for (int i = 0; i < n_guards; ++i) {
      auto v = expect_kv(r, "guard");
      if (v.size() != 11 || v[9] != "->")
        r.fail("guard lines are 'guard: <9 tokens> -> <out>'");
      Guard g;
      for (int k = 0; k < 9; ++k) {
        if (v[k].size() != 1) r.fail("guard tokens are single characters");
        g.cells[k] = tok_of_char(v[k][0]);
      }
      if (v[10] == "x")
        g.keep = true;
      else if (v[10] == "U")
        g.out = fstate::U;
      else if (v[10] == "D")
        g.out = fstate::D;
      else
        r.fail("guard output must be x, U or D");
      guards.push_back(g);
    }

    std::optional<BlockLayer> block;
    if (r.next()) {
      auto toks = split_ws(r.line);
      if (toks.size() == 3 && toks[0] == "block:") {
        BlockLayer b;
        b.tile_count = std::stoi(toks[1]);
        b.first_e = static_cast<State>(std::stoi(toks[2]));
        while (r.next()) {
          auto t = split_ws(r.line);
          if (t.size() == 3 && t[0] == "thpair:") {
            b.h_ok.push_back((std::uint32_t(std::stoi(t[1])) << 16) |
                             std::uint32_t(std::stoi(t[2])));
          } else if (t.size() == 3 && t[0] == "tvpair:") {
            b.v_ok.push_back((std::uint32_t(std::stoi(t[1])) << 16) |
                             std::uint32_t(std::stoi(t[2])));
          } else if (t.size() == 5 && t[0] == "x2:") {
            b.x2_ok.push_back(BlockLayer::pack_roles(std::stoi(t[1]), std::stoi(t[2]),
                                                     std::stoi(t[3]), std::stoi(t[4])));
          } else {
            r.fail("unexpected line in block section");
          }
        }
        std::sort(b.h_ok.begin(), b.h_ok.end());
        std::sort(b.v_ok.begin(), b.v_ok.end());
        std::sort(b.x2_ok.begin(), b.x2_ok.end());
        block = std::move(b);
      } else {
        r.fail("unexpected trailing line '" + r.line + "'");
      }
    }

    auto rule = std::make_shared<FStyleRule>(alphabet, std::move(lib), std::move(guards),
                                             scope, std::move(block));
    rule->name = name;
    rule->origin = origin;
    return std::shared_ptr<const FStyleRule>(rule);
  } catch (const std::exception& e) {
    return Error{std::string("rules parse: ") + e.what()};
  }
}

}  // namespace obsca
