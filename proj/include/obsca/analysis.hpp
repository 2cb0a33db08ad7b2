#pragma once
// Executable evidence about the dynamics of the obstacle/particle automaton
// and its compiled variants: constructive non-sensitivity witnesses, settling
// onto the admissible scaffold, certified equicontinuity violations built
// from the escape path, the sensitivity-constant formula, and bounded-horizon
// classification hints.
//
// Everything here is evidence, not decision: the witness checks run real
// trajectories over a finite horizon and report exactly what they saw.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "obsca/grid.hpp"
#include "obsca/reduce.hpp"
#include "obsca/util.hpp"

namespace obsca {

// --- reports -----------------------------------------------------------------------

// One checked statement: parameters in, pass/fail out. A report is
// reproducible from (seed, parameters) alone.
struct WitnessReport {
  std::string kind;      // "nonsensitivity", "equicontinuity-violation", "attraction"
  bool pass = false;
  Dyadic eps;            // the distance bound the check enforced
  int horizon = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  Dyadic worst;          // largest distance observed across all samples and times
  int fail_sample = -1;  // first offending sample index, -1 when none
  int fail_time = -1;    // first offending time step, -1 when none
  std::optional<Configuration> counterexample;  // offending perturbed start
  std::string detail;    // one-line human-readable summary
};

// --- non-sensitivity (the obstacle shield) -------------------------------------------

// The witness c for eps = 2^-k: all 0 except a centered square obstacle whose
// footprint has side 2k. For k = 1 the formula's side 2 is below the minimal
// legal footprint 3 and is clamped up (that only strengthens the witness);
// *clamped reports whether this happened. The result never has violations.
// Throws unless eps = 2^-k with k >= 1.
Configuration nonsensitivity_witness(const Dyadic& eps, bool* clamped = nullptr);

// Samples perturbations y of c with d(y, c) <= eps/4 — support changes only
// at Chebyshev norm >= k+2, drawn in the annulus [k+2, k+2+horizon] so they
// could causally reach the center within the horizon — and checks
// d(F^t(c), F^t(y)) <= eps for every t = 0..horizon. Sampled junk includes
// live particle pairs, which travel; raw state noise mostly dies in a step.
// Failures are reported, never thrown. The sample sweep runs on `threads`
// workers; the merged report is deterministic in (seed, parameters).
WitnessReport check_nonsensitivity(const Configuration& c, const Dyadic& eps,
                                   int horizon, int samples, std::uint64_t seed,
                                   int threads = 1);

// --- settling onto the scaffold ------------------------------------------------------

struct Attraction {
  bool attracted = false;
  int t0 = -1;     // first settled time, when attracted
  int t_max = 0;   // the bound actually used
  std::optional<Configuration> settled;  // the configuration at t0
  std::vector<Position> residual;        // offending cells at t_max otherwise
};

// Iterates the obstacle/particle rule until the configuration is settled:
// no window violations, every particle a U-over-D pair whose flight windows
// (current and next cell of both halves) hold nothing else, and every pair
// strictly west of all obstacle material, so the remaining motion is plain
// westward flight over free ground. The default t_max (-1) is
// 4 * (support size + support bounding-box perimeter); if the configuration
// is not settled by then, the report carries the residual offending cells.
Attraction attract_to_sft(const Configuration& x, int t_max = -1, int threads = 1);

// --- certified equicontinuity violations ---------------------------------------------

struct EqViolation {
  Configuration y;   // x truncated to the delta ball
  Configuration y2;  // y plus one particle on the escape path
  int n = 0;         // the orbits of y and y2 differ at z0 after n steps
  Position z0;       // observation cell
  Position zn;       // path point where the extra particle was placed
  Dyadic delta;      // both starts stay within delta of x (asserted exactly)
  Dyadic bound;      // 2^(-|z0|-1), the separation the certificate must exceed
  Dyadic measured;   // exact d(F^n(y), F^n(y2)) > bound
  int t0 = 0;        // settling time of y used to anchor the path search
  std::string case_tag;  // which vertical side the escape path used
};

// Builds a certified pair of delta-close starts whose orbits separate at z0:
// truncate x to the delta ball, settle it, build the escape path from z0 over
// the settled obstacles, then place a particle at successive path points z_n
// (n > -log delta) until direct simulation confirms the two orbits disagree
// at z0 after exactly n steps. Requires x(z0) = 0, or x free of particles —
// then z0 must become free once the truncated configuration settles (for an
// all-obstacle x, truncation breaks the material and erosion frees z0).
// Errors when the horizon leaves no room for the required n.
Result<EqViolation> equicontinuity_violation(const Configuration& x, Position z0,
                                             const Dyadic& delta, int horizon,
                                             int threads = 1);

// --- the sensitivity constant ---------------------------------------------------------

struct SensitivityConstant {
  bool unbounded = false;  // obstacles admissible at every size up to the bound
  int l = 0;               // min(largest height, largest width) when bounded
  Dyadic value;            // 2^(-ceil(l/2)+1) when bounded
  ObstacleSearch search;   // the raw search evidence
};

// The formula alone: 2^(-ceil(l/2)+1) for l >= 1 (throws otherwise). The
// ceiling fixes the convention for odd l. Monotone non-increasing in l.
Dyadic sensitivity_value_for(int l);

// Measures l by exhaustive obstacle search up to search_bound and applies the
// formula. Unbounded search means no sensitivity constant at this evidence
// level. A search with no admissible obstacle at all reports l = 0 with the
// metric's maximum 2^0 (nothing persists, so any difference travels freely).
SensitivityConstant sensitivity_constant(const CompiledCA& ca, int search_bound);

// --- bounded-horizon classification ---------------------------------------------------

inline constexpr const char* kClassificationCaveat =
    "bounded-horizon evidence only: membership in these classes is "
    "undecidable, and this hint is not a decision";

struct ClassEvidence {
  std::string class_hint;  // "Eq-like", "S-like", or "N-like"
  int horizon = 0;
  int budget = 0;
  std::uint64_t seed = 0;
  std::string caveat;      // always kClassificationCaveat
  std::string basis;       // what the probes found
  ObstacleSearch search;   // obstacle-size evidence, when gathered
};

// Heuristic evidence: a rule with a block layer is Eq-like when some
// structured square block up to side `budget` is a fixed point over
// `horizon` steps (plain obstacles persist regardless, so without such a
// block it is N-like); otherwise obstacles unbounded up to `budget` is
// N-like and bounded obstacles are S-like. Always carries the caveat.
ClassEvidence classify_evidence(const CompiledCA& ca, int horizon, int budget,
                                std::uint64_t seed);

}  // namespace obsca
