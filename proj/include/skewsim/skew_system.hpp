#pragma once

// Skew products over the Bernoulli shift with interval fiber: step systems,
// window-dependent rules, the C^2 system metric, and programmatic
// verification of the step-system hypotheses.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skewsim/interval_map.hpp"
#include "skewsim/symbolic.hpp"

namespace skewsim {

// Rule kinds: Step reads omega_0 only; Windowed reads the pattern on
// [-radius, radius] and applies a pattern-table override when it matches,
// falling back to the step map of the centre symbol.
struct StepRule {
  std::vector<IntervalMap> maps;
};

struct WindowedRule {
  int radius = 0;
  std::vector<IntervalMap> step_maps;
  // Pattern encoded base-k over the 2*radius+1 symbols, leftmost first.
  std::vector<std::pair<std::uint64_t, IntervalMap>> overrides;
};

class SkewSystem {
 public:
  SkewSystem() = default;
  SkewSystem(int k, StepRule rule, nlohmann::json metadata = {});
  SkewSystem(int k, WindowedRule rule, nlohmann::json metadata = {});

  int alphabet_size() const { return k_; }
  bool is_step() const { return windowed_ == std::nullopt; }
  int window_radius() const { return windowed_ ? windowed_->radius : 0; }
  const std::vector<IntervalMap>& step_maps() const {
    return windowed_ ? windowed_->step_maps : step_.maps;
  }
  const WindowedRule& windowed_rule() const;
  const nlohmann::json& metadata() const { return metadata_; }
  nlohmann::json& metadata() { return metadata_; }

  // Fiber map of sigma^center(omega), i.e. the rule read at base index
  // `center`. Returns a reference into the rule storage.
  const IntervalMap& fiber_map_at(const SymbolWindow& w, long center) const;
  const IntervalMap& fiber_map(const SymbolWindow& w) const {
    return fiber_map_at(w, 0);
  }

  std::uint64_t pattern_code(const SymbolWindow& w, long center) const;

 private:
  int k_ = 2;
  StepRule step_;
  std::optional<WindowedRule> windowed_;
  nlohmann::json metadata_;
};

// Orbit x, f_omega(x), ..., f_omega^n(x); n+1 entries.
std::vector<double> forward_orbit(const SkewSystem& system,
                                  const SymbolWindow& w, double x, int n);

// The concrete step system: k = 2, f0 = cubic pinned at 0.3 (a = 0.5),
// f1 = affine toward 0.7 (slope 0.6), covering interval B = (0.35, 0.65).
SkewSystem make_default_step_system();

// Windowed perturbation with g = identity on U for the all-zero pattern on
// [-m, m]; g is a C^2 blend of the identity into f0 with the given
// transition width. Throws if the blend loses monotonicity.
SkewSystem make_bony_perturbation(const SkewSystem& base, int m,
                                  double u_lo = 0.25, double u_hi = 0.35,
                                  double transition = 0.02);

// Step family used for perturbation sweeps: f1's fixed point is moved so
// that dist_C2(default, result) equals target_dist (the inverse-branch
// difference |shift| * (1/c - 1) dominates and is constant in x).
SkewSystem make_shifted_step_system(double target_dist);

// Grid estimate of sup_omega distC2(g_omega^{+-1}, f_omega^{+-1}); a lower
// estimate of the supremum (e113-style metric).
double dist_c2_maps(const IntervalMap& f, const IntervalMap& g, int grid = 256);
double dist_c2(const SkewSystem& F, const SkewSystem& G,
               const std::vector<SymbolWindow>& sample_windows, int grid = 256);
// Convenience: samples windows covering both rules' radii.
double dist_c2(const SkewSystem& F, const SkewSystem& G, int n_windows = 64,
               int grid = 256, std::uint64_t seed = 1);

struct ConditionReport {
  struct Entry {
    bool pass = false;
    nlohmann::json witness;
  };
  Entry into_interval;           // (a)
  Entry weak_contraction_f0;     // (b)
  Entry uniform_contraction;     // (c)
  Entry contraction_on_average;  // (d)
  Entry fixed_points;            // (e)
  Entry covering;                // (f)
  int grid = 0;

  bool all_pass() const {
    return into_interval.pass && weak_contraction_f0.pass &&
           uniform_contraction.pass && contraction_on_average.pass &&
           fixed_points.pass && covering.pass;
  }
  nlohmann::json to_json() const;
};

// Verifies conditions (a)-(f) for a step system on a grid of the given
// resolution. Throws std::invalid_argument for non-step systems.
ConditionReport check_conditions(const SkewSystem& system, int grid = 10000);

// Empirical Lipschitz constant of omega -> g_omega in the base metric.
double estimate_base_lipschitz(const SkewSystem& system, int n_pairs,
                               std::uint64_t seed);

void to_json(nlohmann::json& j, const SkewSystem& s);
void from_json(const nlohmann::json& j, SkewSystem& s);

}  // namespace skewsim
