#include "obsca/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace obsca {

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

double Dyadic::approx() const { return zero ? 0.0 : std::ldexp(1.0, -exp); }

std::string Dyadic::to_string() const {
  if (zero) return "0";
  if (exp == 0) return "1";
  return "2^-" + std::to_string(exp);
}

// --- Alphabet ---------------------------------------------------------------

State Alphabet::add_state(const std::string& state_name, char display) {
  if (by_name_.count(state_name)) throw std::invalid_argument("duplicate state name: " + state_name);
  if (by_char_.count(display)) throw std::invalid_argument(std::string("duplicate state char: ") + display);
  State id = static_cast<State>(names_.size());
  names_.push_back(state_name);
  chars_.push_back(display);
  by_name_[state_name] = id;
  by_char_[display] = id;
  return id;
}

void Alphabet::add_class(const std::string& class_name, const std::vector<State>& members) {
  for (State s : members) {
    if (s >= names_.size()) throw std::invalid_argument("class member out of range: " + class_name);
  }
  std::vector<State> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  classes_[class_name] = std::move(sorted);
}

State Alphabet::state(const std::string& state_name) const {
  auto it = by_name_.find(state_name);
  if (it == by_name_.end()) throw std::invalid_argument("unknown state: " + state_name);
  return it->second;
}

State Alphabet::state_of_char(char c) const {
  auto it = by_char_.find(c);
  if (it == by_char_.end()) throw std::invalid_argument(std::string("unknown state char: ") + c);
  return it->second;
}

const std::vector<State>& Alphabet::class_members(const std::string& class_name) const {
  auto it = classes_.find(class_name);
  if (it == classes_.end()) throw std::invalid_argument("unknown class: " + class_name);
  return it->second;
}

bool Alphabet::in_class(const std::string& class_name, State s) const {
  const auto& m = class_members(class_name);
  return std::binary_search(m.begin(), m.end(), s);
}

std::vector<std::string> Alphabet::class_names() const {
  std::vector<std::string> out;
  out.reserve(classes_.size());
  for (const auto& [k, v] : classes_) out.push_back(k);
  std::sort(out.begin(), out.end());
  return out;
}

// --- Configuration -----------------------------------------------------------

std::vector<Position> Configuration::sorted_support() const {
  std::vector<Position> out;
  out.reserve(support_.size());
  for (const auto& [p, s] : support_) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

bool Configuration::bounds(Position& lo, Position& hi) const {
  if (support_.empty()) return false;
  lo = {std::numeric_limits<std::int32_t>::max(), std::numeric_limits<std::int32_t>::max()};
  hi = {std::numeric_limits<std::int32_t>::min(), std::numeric_limits<std::int32_t>::min()};
  for (const auto& [p, s] : support_) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  return true;
}

bool operator==(const Configuration& a, const Configuration& b) {
  if (a.background_ != b.background_) return false;
  if (a.support_.size() != b.support_.size()) return false;
  const std::string& an = a.alphabet_ ? a.alphabet_->name() : "";
  const std::string& bn = b.alphabet_ ? b.alphabet_->name() : "";
  if (an != bn) return false;
  for (const auto& [p, s] : a.support_) {
    auto it = b.support_.find(p);
    if (it == b.support_.end() || it->second != s) return false;
  }
  return true;
}

// --- Pattern ------------------------------------------------------------------

bool Pattern::concrete() const {
  for (const auto& c : cells) {
    if (c.wildcard) return false;
  }
  return true;
}

// --- operations -----------------------------------------------------------------

Dyadic cantor_distance(const Configuration& x, const Configuration& y) {
  const std::string& xn = x.alphabet() ? x.alphabet()->name() : "";
  const std::string& yn = y.alphabet() ? y.alphabet()->name() : "";
  if (xn != yn || x.background() != y.background()) {
    throw std::invalid_argument("cantor_distance: alphabet or background mismatch");
  }
  // Disagreements can only occur on the union of the supports.
  int best = std::numeric_limits<int>::max();
  auto scan = [&](const Configuration& a, const Configuration& b) {
    for (const auto& [p, s] : a.support()) {
      if (b.get(p) != s) best = std::min(best, p.norm());
    }
  };
  scan(x, y);
  scan(y, x);
  if (best == std::numeric_limits<int>::max()) return Dyadic::zero_value();
  return Dyadic::pow2(-best);
}

Configuration shift(const Configuration& x, Position m) {
  Configuration out(x.alphabet(), x.background());
  for (const auto& [p, s] : x.support()) out.set(p - m, s);
  return out;
}

Pattern extract(const Configuration& x, Position origin, int w, int h) {
  if (w < 1 || h < 1) throw std::invalid_argument("extract: non-positive window");
  Pattern p;
  p.width = w;
  p.height = h;
  p.cells.reserve(static_cast<std::size_t>(w) * h);
  for (int row = 0; row < h; ++row) {
    int y = origin.y + (h - 1 - row);  // row 0 = top
    for (int col = 0; col < w; ++col) {
      p.cells.push_back(PatternCell::concrete(x.get({origin.x + col, y})));
    }
  }
  return p;
}

bool pattern_matches(const Pattern& p, const Pattern& q, const Alphabet& alphabet) {
  if (p.width != q.width || p.height != q.height) {
    throw std::invalid_argument("pattern_matches: dimension mismatch");
  }
  for (std::size_t i = 0; i < p.cells.size(); ++i) {
    const PatternCell& pc = p.cells[i];
    const PatternCell& qc = q.cells[i];
    if (!pc.wildcard) {
      if (qc.wildcard || qc.state != pc.state) return false;
    } else if (!qc.wildcard) {
      if (!alphabet.in_class(pc.cls, qc.state)) return false;
    } else {
      // wildcard vs wildcard: q must be at least as constrained as p
      const auto& qm = alphabet.class_members(qc.cls);
      for (State s : qm) {
        if (!alphabet.in_class(pc.cls, s)) return false;
      }
    }
  }
  return true;
}

}  // namespace obsca
