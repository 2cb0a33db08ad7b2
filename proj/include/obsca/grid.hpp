#pragma once
// Configurations over the 2D integer lattice: finite-support state maps over a
// declared background, the exact 2^(-k) metric, pattern extraction, and the
// shift action. Everything else in the library builds on these types.
//
// Frozen conventions:
//  - The norm is Chebyshev: |(x,y)| = max(|x|,|y|).
//  - Patterns and windows are row-major with row 0 at the TOP (decreasing y),
//    matching the text raster format.
//  - Configurations are canonical: the support never stores the background.

#include <cstdint>
#include <cstdlib>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "obsca/util.hpp"

namespace obsca {

using State = std::uint16_t;

struct Position {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend bool operator==(Position a, Position b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(Position a, Position b) { return !(a == b); }
  // Lexicographic (y desc, x asc) would surprise; use plain (x, y) order.
  friend bool operator<(Position a, Position b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  }
  Position operator+(Position o) const { return {x + o.x, y + o.y}; }
  Position operator-(Position o) const { return {x - o.x, y - o.y}; }

  int norm() const {
    int ax = std::abs(x), ay = std::abs(y);
    return ax > ay ? ax : ay;
  }
};

struct PositionHash {
  std::size_t operator()(Position p) const {
    std::uint64_t v = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x)) << 32) |
                      static_cast<std::uint32_t>(p.y);
    v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ull;
    v = (v ^ (v >> 27)) * 0x94d049bb133111ebull;
    return static_cast<std::size_t>(v ^ (v >> 31));
  }
};

// Chebyshev distance between two positions.
inline int chebyshev(Position a, Position b) { return (a - b).norm(); }

// --- alphabet -----------------------------------------------------------------
// Ordered state set with a printable char per state and named state classes.
// Immutable after construction; shared by configurations and rule tables.
class Alphabet {
 public:
  explicit Alphabet(std::string name) : name_(std::move(name)) {}

  State add_state(const std::string& state_name, char display);
  void add_class(const std::string& class_name, const std::vector<State>& members);

  const std::string& name() const { return name_; }
  int size() const { return static_cast<int>(names_.size()); }
  const std::string& state_name(State s) const { return names_.at(s); }
  char display(State s) const { return chars_.at(s); }

  bool has_state(const std::string& state_name) const { return by_name_.count(state_name) > 0; }
  State state(const std::string& state_name) const;            // throws on unknown
  bool has_char(char c) const { return by_char_.count(c) > 0; }
  State state_of_char(char c) const;                           // throws on unknown

  bool has_class(const std::string& class_name) const { return classes_.count(class_name) > 0; }
  const std::vector<State>& class_members(const std::string& class_name) const;
  bool in_class(const std::string& class_name, State s) const;
  std::vector<std::string> class_names() const;  // sorted

 private:
  std::string name_;
  std::vector<std::string> names_;
  std::vector<char> chars_;
  std::unordered_map<std::string, State> by_name_;
  std::unordered_map<char, State> by_char_;
  std::unordered_map<std::string, std::vector<State>> classes_;  // sorted members
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

// --- configuration --------------------------------------------------------------
// Finite-support assignment of states to lattice positions over a background
// state. Canonical form: no support entry equals the background, so equality
// is structural.
class Configuration {
 public:
  Configuration() = default;
  Configuration(AlphabetPtr alphabet, State background)
      : alphabet_(std::move(alphabet)), background_(background) {}

  const AlphabetPtr& alphabet() const { return alphabet_; }
  State background() const { return background_; }

  State get(Position p) const {
    auto it = support_.find(p);
    return it == support_.end() ? background_ : it->second;
  }
  void set(Position p, State s) {
    if (s == background_) {
      support_.erase(p);
    } else {
      support_[p] = s;
    }
  }

  const std::unordered_map<Position, State, PositionHash>& support() const { return support_; }
  bool empty() const { return support_.empty(); }
  std::size_t support_size() const { return support_.size(); }

  // Support positions in deterministic (x, y) order.
  std::vector<Position> sorted_support() const;

  // Tight bounding box of the support; false when the support is empty.
  bool bounds(Position& lo, Position& hi) const;

  friend bool operator==(const Configuration& a, const Configuration& b);
  friend bool operator!=(const Configuration& a, const Configuration& b) { return !(a == b); }

 private:
  AlphabetPtr alphabet_;
  State background_ = 0;
  std::unordered_map<Position, State, PositionHash> support_;
};

// --- patterns -----------------------------------------------------------------
// Rectangular state pattern; a cell is either a concrete state or a wildcard
// constrained to a named class of the alphabet. Row 0 is the top row.
struct PatternCell {
  bool wildcard = false;
  State state = 0;        // concrete value when !wildcard
  std::string cls;        // class name when wildcard

  static PatternCell concrete(State s) { return {false, s, {}}; }
  static PatternCell of_class(std::string class_name) { return {true, 0, std::move(class_name)}; }

  friend bool operator==(const PatternCell& a, const PatternCell& b) {
    return a.wildcard == b.wildcard &&
           (a.wildcard ? a.cls == b.cls : a.state == b.state);
  }
};

struct Pattern {
  int width = 0;
  int height = 0;
  std::vector<PatternCell> cells;  // row-major, top row first

  const PatternCell& at(int row, int col) const { return cells[row * width + col]; }
  PatternCell& at(int row, int col) { return cells[row * width + col]; }
  bool concrete() const;

  friend bool operator==(const Pattern& a, const Pattern& b) {
    return a.width == b.width && a.height == b.height && a.cells == b.cells;
  }
};

// --- core operations -------------------------------------------------------------

// Exact metric value: 0 if equal, else 2^(-k) with k the smallest Chebyshev
// norm of a disagreeing position. Throws on alphabet mismatch.
Dyadic cantor_distance(const Configuration& x, const Configuration& y);

// Translated configuration: result(z) = x(z + m).
Configuration shift(const Configuration& x, Position m);

// The w x h window of x whose lower-left corner is origin, as a concrete
// pattern (top row first).
Pattern extract(const Configuration& x, Position origin, int w, int h);

// Wildcard-aware match. q's concrete cells must equal p's or fall inside p's
// wildcard class; a wildcard in q matches a wildcard in p only when q's class
// is a subset of p's. Throws on dimension mismatch.
bool pattern_matches(const Pattern& p, const Pattern& q, const Alphabet& alphabet);

}  // namespace obsca
