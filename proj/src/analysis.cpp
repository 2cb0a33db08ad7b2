#include "obsca/analysis.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include "obsca/engine.hpp"
#include "obsca/fdef.hpp"
#include "obsca/router.hpp"
#include "obsca/rules.hpp"
#include "obsca/sft.hpp"

namespace obsca {

namespace {

const FStyleRule& f_rule() {
  static const std::shared_ptr<const FStyleRule> rule = f_rule_table();
  return *rule;
}

const PatternLibrary& af_library() {
  static const PatternLibrary lib = sigma_af();
  return lib;
}

void require_f_alphabet(const Configuration& x, const char* who) {
  if (!x.alphabet() || x.alphabet()->size() != fstate::Count)
    throw std::invalid_argument(std::string(who) +
                                ": configuration must use the obstacle/particle alphabet");
}

bool is_particle(State s) { return s == fstate::U || s == fstate::D; }

bool carries_particles(const Configuration& x) {
  if (is_particle(x.background())) return true;
  for (const auto& [p, s] : x.support()) {
    (void)p;
    if (is_particle(s)) return true;
  }
  return false;
}

// Uniform cell on the Chebyshev circle of radius m >= 1 (8m cells).
Position ring_cell(Rng& rng, int m) {
  const std::int64_t idx = static_cast<std::int64_t>(rng.below(8ull * m));
  const int side = static_cast<int>(idx / (2 * m));
  const int off = static_cast<int>(idx % (2 * m));
  switch (side) {
    case 0: return {m, -m + off};
    case 1: return {m - off, m};
    case 2: return {-m, m - off};
    default: return {-m + off, -m};
  }
}

// A random perturbation of c whose changes all sit at norm in [lo, hi]:
// a spray of raw states (mostly short-lived junk) plus a few live particle
// pairs, which actually travel.
Configuration perturb_annulus(const Configuration& c, int lo, int hi, Rng& rng) {
  Configuration y = c;
  const int cells = 1 + static_cast<int>(rng.below(12));
  for (int i = 0; i < cells; ++i) {
    const int m = static_cast<int>(rng.range(lo, hi));
    y.set(ring_cell(rng, m), static_cast<State>(rng.below(fstate::Count)));
  }
  const int pairs = static_cast<int>(rng.below(4));
  for (int i = 0; i < pairs; ++i) {
    const int m = static_cast<int>(rng.range(lo, hi));
    const Position u = ring_cell(rng, m);
    const Position d{u.x, u.y - 1};
    if (u.norm() < lo || d.norm() < lo) continue;
    if (y.get(u) != fstate::Zero || y.get(d) != fstate::Zero) continue;
    y.set(u, fstate::U);
    y.set(d, fstate::D);
  }
  return y;
}

// Particle halves that are not yet in settled westward flight: each U needs a
// D just below, the 4x4 block of flight windows around the pair (both halves,
// current and next cell) must hold nothing else, and no obstacle material may
// sit at or west of the pair's column.
void transit_offenders(const Configuration& y, std::vector<Position>* out) {
  const Alphabet& a = *y.alphabet();
  std::int32_t min_af_x = INT32_MAX;
  for (const auto& [p, s] : y.support())
    if (a.in_class(kObstacleClass, s)) min_af_x = std::min(min_af_x, p.x);
  for (const auto& [p, s] : y.support()) {
    if (s == fstate::U) {
      const Position d{p.x, p.y - 1};
      bool ok = y.get(d) == fstate::D && min_af_x > p.x;
      for (int dx = -2; ok && dx <= 1; ++dx)
        for (int dy = -2; ok && dy <= 1; ++dy) {
          const Position w{p.x + dx, p.y + dy};
          if (w == p || w == d) continue;
          if (y.get(w) != fstate::Zero) ok = false;
        }
      if (!ok) out->push_back(p);
    } else if (s == fstate::D) {
      if (y.get({p.x, p.y + 1}) != fstate::U) out->push_back(p);
    }
  }
}

std::vector<Position> settle_offenders(const Configuration& y) {
  Result<std::vector<Position>> v = violations(y, af_library());
  if (!v.ok()) throw std::invalid_argument("attract_to_sft: " + v.error().describe());
  std::vector<Position> bad = std::move(v).take();
  transit_offenders(y, &bad);
  std::sort(bad.begin(), bad.end());
  bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
  return bad;
}

// x inside the Chebyshev ball of radius r, background 0 outside.
Configuration truncate_to_ball(const Configuration& x, int r) {
  Configuration y(x.alphabet(), fstate::Zero);
  if (x.background() == fstate::Zero) {
    for (const auto& [p, s] : x.support())
      if (p.norm() <= r) y.set(p, s);
  } else {
    for (int yy = -r; yy <= r; ++yy)
      for (int xx = -r; xx <= r; ++xx) y.set({xx, yy}, x.get({xx, yy}));
  }
  return y;
}

// Exact metric value even when the backgrounds differ (then all but finitely
// many cells disagree, so the nearest disagreement is found by scanning rings
// outward; the ring just past both supports disagrees everywhere).
Dyadic config_distance(const Configuration& x, const Configuration& y) {
  if (x.background() == y.background()) return cantor_distance(x, y);
  int radius = 0;
  Position lo{}, hi{};
  for (const Configuration* c : {&x, &y})
    if (c->bounds(lo, hi))
      radius = std::max({radius, std::abs(lo.x), std::abs(hi.x), std::abs(lo.y), std::abs(hi.y)});
  for (int m = 0; m <= radius + 1; ++m) {
    if (m == 0) {
      if (x.get({0, 0}) != y.get({0, 0})) return Dyadic::pow2(0);
      continue;
    }
    for (int i = -m; i < m; ++i) {
      for (const Position p : {Position{m, i}, Position{-m, -i}, Position{-i, m}, Position{i, -m}})
        if (x.get(p) != y.get(p)) return Dyadic::pow2(-m);
    }
  }
  return Dyadic::pow2(-(radius + 1));  // unreachable: that ring disagrees everywhere
}

Configuration without_particles(const Configuration& x) {
  Configuration y = x;
  std::vector<Position> drop;
  for (const auto& [p, s] : y.support())
    if (is_particle(s)) drop.push_back(p);
  for (const Position& p : drop) y.set(p, fstate::Zero);
  return y;
}

}  // namespace

// --- non-sensitivity -----------------------------------------------------------------

Configuration nonsensitivity_witness(const Dyadic& eps, bool* clamped) {
  if (eps.is_zero() || eps.exp < 1)
    throw std::invalid_argument("nonsensitivity_witness: eps must be 2^-k with k >= 1");
  int side = 2 * eps.exp;
  const bool clamp = side < 3;
  if (clamp) side = 3;
  if (clamped) *clamped = clamp;
  Configuration c = f_configuration();
  const int lo = -(side / 2);
  paint_obstacle(c, {lo + 1, lo + 1}, side - 2, side - 2);
  return c;
}

WitnessReport check_nonsensitivity(const Configuration& c, const Dyadic& eps, int horizon,
                                   int samples, std::uint64_t seed, int threads) {
  require_f_alphabet(c, "check_nonsensitivity");
  if (c.background() != fstate::Zero)
    throw std::invalid_argument("check_nonsensitivity: background must be 0");
  if (eps.is_zero() || eps.exp < 1)
    throw std::invalid_argument("check_nonsensitivity: eps must be 2^-k with k >= 1");
  if (horizon < 1 || samples < 1)
    throw std::invalid_argument("check_nonsensitivity: horizon and samples must be >= 1");

  WitnessReport rep;
  rep.kind = "nonsensitivity";
  rep.eps = eps;
  rep.horizon = horizon;
  rep.samples = samples;
  rep.seed = seed;

  // Reference orbit, shared by every sample.
  std::vector<Configuration> orbit;
  orbit.reserve(horizon + 1);
  orbit.push_back(c);
  for (int t = 1; t <= horizon; ++t) orbit.push_back(step(f_rule(), orbit.back()));

  // Per-sample seeds are drawn up front so the outcome cannot depend on the
  // sweep order or the thread count.
  std::vector<std::uint64_t> seeds(samples);
  Rng master(seed);
  for (auto& s : seeds) s = master.next();

  struct Outcome {
    bool fail = false;
    int time = -1;
    Dyadic worst;
    std::optional<Configuration> start;
  };
  std::vector<Outcome> results(samples);
  const int lo = eps.exp + 2;
  const auto work = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      Rng rng(seeds[i]);
      const Configuration start = perturb_annulus(c, lo, lo + horizon, rng);
      Configuration y = start;
      Outcome& o = results[i];
      for (int t = 0; t <= horizon; ++t) {
        if (t > 0) y = step(f_rule(), y);
        const Dyadic d = cantor_distance(orbit[t], y);
        if (o.worst < d) o.worst = d;
        if (eps < d) {
          o.fail = true;
          o.time = t;
          o.start = start;
          break;
        }
      }
    }
  };
  const int nt = std::max(1, std::min(threads, samples));
  if (nt == 1) {
    work(0, samples);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t)
      pool.emplace_back(work, samples * t / nt, samples * (t + 1) / nt);
    for (auto& th : pool) th.join();
  }

  rep.pass = true;
  for (int i = 0; i < samples; ++i) {
    const Outcome& o = results[i];
    if (rep.worst < o.worst) rep.worst = o.worst;
    if (o.fail && rep.pass) {
      rep.pass = false;
      rep.fail_sample = i;
      rep.fail_time = o.time;
      rep.counterexample = o.start;
    }
  }
  rep.detail = rep.pass
                   ? "all " + std::to_string(samples) + " perturbed orbits stayed within " +
                         eps.to_string() + " for " + std::to_string(horizon) + " steps"
                   : "sample " + std::to_string(rep.fail_sample) + " escaped the " +
                         eps.to_string() + " bound at t = " + std::to_string(rep.fail_time);
  return rep;
}

// --- settling onto the scaffold --------------------------------------------------------

Attraction attract_to_sft(const Configuration& x, int t_max, int threads) {
  require_f_alphabet(x, "attract_to_sft");
  if (t_max < 0) {
    Position lo{}, hi{};
    int perimeter = 0;
    if (x.bounds(lo, hi)) perimeter = 2 * ((hi.x - lo.x + 1) + (hi.y - lo.y + 1));
    t_max = 4 * (static_cast<int>(x.support_size()) + perimeter);
  }
  Attraction out;
  out.t_max = t_max;
  Configuration y = x;
  for (int t = 0;; ++t) {
    std::vector<Position> bad = settle_offenders(y);
    if (bad.empty()) {
      out.attracted = true;
      out.t0 = t;
      out.settled = std::move(y);
      return out;
    }
    // A non-0 background cannot be stepped; report it as unsettled directly.
    if (t == t_max || y.background() != fstate::Zero) {
      out.residual = std::move(bad);
      return out;
    }
    y = step(f_rule(), y, threads);
  }
}

// --- certified equicontinuity violations ------------------------------------------------

Result<EqViolation> equicontinuity_violation(const Configuration& x, Position z0,
                                             const Dyadic& delta, int horizon, int threads) {
  require_f_alphabet(x, "equicontinuity_violation");
  if (delta.is_zero() || delta.exp < 1)
    return Error{"equicontinuity_violation: delta must be 2^-k with k >= 1"};
  if (horizon < 1) return Error{"equicontinuity_violation: horizon must be >= 1"};
  const int j = delta.exp;
  if (x.get(z0) != fstate::Zero && carries_particles(x))
    return Error::at(
        "equicontinuity_violation: z0 is occupied and the configuration carries particles",
        z0.x, z0.y);

  Configuration y = truncate_to_ball(x, j);
  Attraction att = attract_to_sft(y, -1, threads);
  if (!att.attracted)
    return Error{"equicontinuity_violation: the truncated configuration did not settle within " +
                 std::to_string(att.t_max) + " steps"};
  if (att.settled->get(z0) != fstate::Zero)
    return Error::at(
        "equicontinuity_violation: z0 is still inside obstacle material after settling; "
        "pick a free cell",
        z0.x, z0.y);

  // The escape path is built over the settled obstacles alone. Stray settled
  // particles fly west and never return east, so they cannot invalidate it.
  Result<Path> pr = build_path(without_particles(*att.settled), z0, horizon + 2);
  if (!pr.ok()) return pr.error();
  const Path path = std::move(pr).take();

  // n must put both starts in the delta ball (n > j); when the truncated
  // field needs t0 > 0 steps to settle, the particle also has to stay clear
  // of the unsettled region until then, so start beyond t0 + 2j + 2.
  const int n_min = std::max(j + 1, att.t0 == 0 ? 0 : att.t0 + 2 * j + 2);
  const Dyadic bound = Dyadic::pow2(-(z0.norm() + 1));
  for (int n = n_min; n <= horizon; ++n) {
    const Position zn = path.points[n];
    const Position u_cell = path.case_tag == "below-free" ? zn : Position{zn.x, zn.y + 1};
    Result<Configuration> placed = place_particle(y, u_cell);
    if (!placed.ok()) continue;  // inside truncated material; try farther out
    Configuration y2 = std::move(placed).take();
    const Configuration a = run(f_rule(), y, n, threads);
    const Configuration b = run(f_rule(), y2, n, threads);
    if (a.get(z0) == b.get(z0)) continue;
    const Dyadic measured = cantor_distance(a, b);
    if (!(bound < measured)) continue;
    EqViolation out;
    out.y = std::move(y);
    out.y2 = std::move(y2);
    out.n = n;
    out.z0 = z0;
    out.zn = zn;
    out.delta = delta;
    out.bound = bound;
    out.measured = measured;
    out.t0 = att.t0;
    out.case_tag = path.case_tag;
    if (delta < config_distance(x, out.y) || delta < config_distance(x, out.y2))
      return Error{"equicontinuity_violation: internal: constructed pair left the delta ball"};
    return out;
  }
  return Error{"equicontinuity_violation: no certified separation time within horizon " +
               std::to_string(horizon) + "; raise the horizon"};
}

// --- the sensitivity constant ------------------------------------------------------------

Dyadic sensitivity_value_for(int l) {
  if (l < 1) throw std::invalid_argument("sensitivity_value_for: l must be >= 1");
  return Dyadic::pow2(1 - (l + 1) / 2);
}

SensitivityConstant sensitivity_constant(const CompiledCA& ca, int search_bound) {
  SensitivityConstant out;
  out.search = max_admissible_obstacle(ca, search_bound);
  if (out.search.unbounded_up_to_bound()) {
    out.unbounded = true;
    return out;
  }
  if (!out.search.any) {
    // Nothing persists at all; any difference travels freely. Record the
    // metric's maximum as the (degenerate) constant.
    out.l = 0;
    out.value = Dyadic::pow2(0);
    return out;
  }
  out.l = std::min(out.search.max_h, out.search.max_w);
  out.value = sensitivity_value_for(out.l);
  return out;
}

// --- bounded-horizon classification -------------------------------------------------------

ClassEvidence classify_evidence(const CompiledCA& ca, int horizon, int budget,
                                std::uint64_t seed) {
  if (horizon < 1 || budget < 2)
    throw std::invalid_argument("classify_evidence: horizon >= 1 and budget >= 2 required");
  ClassEvidence out;
  out.horizon = horizon;
  out.budget = budget;
  out.seed = seed;
  out.caveat = kClassificationCaveat;

  const auto* fr = dynamic_cast<const FStyleRule*>(ca.rule_table.get());
  if (fr && fr->block_layer()) {
    // Structured square blocks: equicontinuity-like evidence needs a fixed
    // block at the probe ceiling (side budget, or budget-1 in case the tile
    // layer only fills one parity). Plain obstacles persist under these rules
    // regardless, so bounded block sizes still mean never-sensitive.
    for (int s = budget; s >= budget - 1 && s >= 2; --s) {
      Configuration block;
      if (!fill_interior(ca, s, s, &block, {0, 0})) continue;
      if (run(*ca.rule_table, block, horizon) == block) {
        out.class_hint = "Eq-like";
        out.basis = "a side-" + std::to_string(s) + " structured block is a fixed point over " +
                    std::to_string(horizon) + " steps";
        return out;
      }
    }
    out.class_hint = "N-like";
    out.basis = "no structured block of side " + std::to_string(budget) + " or " +
                std::to_string(budget - 1) +
                " is a fixed point, while plain obstacles persist at every size";
    return out;
  }

  out.search = max_admissible_obstacle(ca, budget);
  if (out.search.unbounded_up_to_bound()) {
    out.class_hint = "N-like";
    out.basis = "admissible obstacles exist at every interior size up to " +
                std::to_string(budget);
  } else if (!out.search.any) {
    out.class_hint = "S-like";
    out.basis = "no admissible obstacle up to interior size " + std::to_string(budget) +
                "; every difference travels freely";
  } else {
    const int l = std::min(out.search.max_h, out.search.max_w);
    out.class_hint = "S-like";
    out.basis = "obstacle interiors bounded by " + std::to_string(out.search.max_w) + "x" +
                std::to_string(out.search.max_h) + " within budget " + std::to_string(budget) +
                "; sensitivity constant " + sensitivity_value_for(l).to_string();
  }
  return out;
}

}  // namespace obsca
