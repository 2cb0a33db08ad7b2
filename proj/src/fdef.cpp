#include "obsca/fdef.hpp"

#include <mutex>
#include <stdexcept>

namespace obsca {

namespace {

AlphabetPtr build_f_alphabet() {
  auto a = std::make_shared<Alphabet>("F");
  a->add_state("0", '.');
  a->add_state("1", '1');
  a->add_state("U", 'U');
  a->add_state("D", 'D');
  a->add_state("v", 'v');
  a->add_state("^", '^');
  a->add_state("<", '<');
  a->add_state(">", '>');
  a->add_state("r", 'r');
  a->add_state("7", '7');
  a->add_state("L", 'L');
  a->add_state("J", 'J');
  a->add_class(kObstacleClass,
               {fstate::One, fstate::TopEdge, fstate::BottomEdge, fstate::RightEdge,
                fstate::LeftEdge, fstate::TopLeft, fstate::TopRight, fstate::BottomLeft,
                fstate::BottomRight});
  a->add_class(kFreeClass, {fstate::Zero, fstate::U, fstate::D});
  a->add_class(kParticleClass, {fstate::U, fstate::D});
  return a;
}

}  // namespace

AlphabetPtr f_alphabet() {
  static AlphabetPtr cached = build_f_alphabet();
  return cached;
}

AlphabetPtr extend_f_alphabet(const std::string& name,
                              const std::vector<std::pair<std::string, char>>& extra,
                              const std::string& extra_class) {
  auto a = std::make_shared<Alphabet>(name);
  const Alphabet& base = *f_alphabet();
  for (State s = 0; s < fstate::Count; ++s) a->add_state(base.state_name(s), base.display(s));
  std::vector<State> obstacle = base.class_members(kObstacleClass);
  std::vector<State> extras;
  for (const auto& [state_name, display] : extra) {
    extras.push_back(a->add_state(state_name, display));
    obstacle.push_back(extras.back());
  }
  a->add_class(kObstacleClass, obstacle);
  if (!extra_class.empty()) a->add_class(extra_class, extras);
  a->add_class(kFreeClass, base.class_members(kFreeClass));
  a->add_class(kParticleClass, base.class_members(kParticleClass));
  return a;
}

State obstacle_footprint_state(int dx, int dy, int W, int H) {
  if (dx < 0 || dy < 0 || dx >= W || dy >= H || W < 3 || H < 3) {
    throw std::invalid_argument("obstacle_footprint_state: offset outside footprint");
  }
  const bool left = dx == 0, right = dx == W - 1, bottom = dy == 0, top = dy == H - 1;
  if (left && bottom) return fstate::BottomLeft;
  if (left && top) return fstate::TopLeft;
  if (right && bottom) return fstate::BottomRight;
  if (right && top) return fstate::TopRight;
  if (left) return fstate::LeftEdge;
  if (right) return fstate::RightEdge;
  if (bottom) return fstate::BottomEdge;
  if (top) return fstate::TopEdge;
  return fstate::One;
}

void paint_obstacle(Configuration& x, Position interior_origin, int w, int h) {
  if (w < 1 || h < 1) throw std::invalid_argument("paint_obstacle: empty interior");
  const int W = w + 2, H = h + 2;
  for (int dy = 0; dy < H; ++dy) {
    for (int dx = 0; dx < W; ++dx) {
      x.set({interior_origin.x - 1 + dx, interior_origin.y - 1 + dy},
            obstacle_footprint_state(dx, dy, W, H));
    }
  }
}

Configuration f_configuration() { return Configuration(f_alphabet(), fstate::Zero); }

}  // namespace obsca
