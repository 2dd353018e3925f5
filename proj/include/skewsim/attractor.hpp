#pragma once

// Pullback computation of maximal-attractor fibers: invariant-graph values,
// bone detection and census, closure witnesses for bones, and the
// backward-coding / thickness constructions for the covering interval.

#include <cstdint>
#include <string>
#include <vector>

#include "skewsim/skew_system.hpp"
#include "skewsim/symbolic.hpp"

namespace skewsim {

struct BoneFiberError : std::runtime_error {
  BoneFiberError() : std::runtime_error("fiber is a bone; graph value undefined") {}
};

// Depth-n pullback interval I(omega, n) = g_{s^-1 w} o ... o g_{s^-n w}([0,1]).
struct FiberBox {
  int depth = 0;
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
};

FiberBox pullback_fiber(const SkewSystem& system, const SymbolWindow& w, int n);

enum class FiberKind { Point, Bone, Indeterminate };

struct FiberClass {
  FiberKind kind = FiberKind::Indeterminate;
  double value = 0.0;     // Point: the graph value
  double lo = 0.0;        // interval limits (Bone) or last box (Indeterminate)
  double hi = 1.0;
  double width = 1.0;
  double residual = 1.0;  // endpoint residual of the classification
  int depth = 0;          // pullback depth actually used
};

// Classifies the fiber over w. Windows with a constant past tail are
// resolved exactly: beyond the finite prefix the pullback iterates a single
// tail map, whose extreme fixed points give the limit interval; the prefix
// maps are then applied to it. Windows with an unspecified past tail are
// classified from the computed width at the deepest determinable depth
// (capped at max_depth), with a stall heuristic for bones.
FiberClass graph_value(const SkewSystem& system, const SymbolWindow& w,
                       int max_depth, double tol, double eps_bone = 1e-4);

// |g_w(gamma(w)) - gamma(shift(w))|; throws BoneFiberError on bone fibers.
double invariance_residual(const SkewSystem& system, const SymbolWindow& w,
                           int depth, double tol = 1e-11);

// Containment defect of g_w(A_w) inside A_{shift(w)} at the given depth
// (0 when the attractor equivariance holds exactly).
double invariance_containment(const SkewSystem& system, const SymbolWindow& w,
                              int depth);

struct CensusRow {
  std::string digest;
  FiberClass cls;
};

struct CensusRecord {
  int n_samples = 0;
  int past_depth = 0;
  double eps_bone = 0.0;
  std::uint64_t seed = 0;
  int points = 0;
  int bones = 0;
  int indeterminate = 0;
  std::vector<CensusRow> rows;
  double bone_fraction() const {
    return n_samples ? static_cast<double>(bones) / n_samples : 0.0;
  }
};

// Classification census over Bernoulli-sampled windows.
CensusRecord bone_census(const SkewSystem& system, int n_samples,
                         int past_depth, double eps_bone, std::uint64_t seed);

// Census over targeted windows (explicit list instead of Bernoulli draws).
CensusRecord targeted_census(const SkewSystem& system,
                             const std::vector<SymbolWindow>& windows,
                             int max_depth, double eps_bone);

struct WitnessResult {
  bool success = false;
  SymbolWindow witness;
  double gamma = 0.0;
  double fiber_distance = 1.0;   // |gamma(witness) - x|
  double base_distance = 1.0;    // d(witness, w)
  int splice_depth = 0;          // depth of the zero run before the 1-tail
};

// Searches for a graph point approximating the bone point (w, x): a window
// in the cylinder U_N(w) whose past is rewritten, beyond a zero run of
// searched depth, into a tail of 1's. Deeper zero runs steer the arriving
// graph value monotonically toward the bone edge, so the splice depth is
// swept (with bisection refinement) up to depth_budget.
WitnessResult bone_closure_witness(const SkewSystem& system,
                                   const SymbolWindow& w, double x, int N,
                                   double eps, int depth_budget);

// Greedy backward coding of x in the covering interval B = [x0, x1]:
// symbols omega_{-1..-n} with x in f_{w-1} o ... o f_{w-j}(B) at every
// depth j; ties prefer symbol 0. Step systems only.
std::vector<int> backward_code(const SkewSystem& system, double x, double x0,
                               double x1, int n);

struct CoverageRow {
  double x = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

struct CoverageRecord {
  double coverage = 0.0;  // fraction of grid points certified within grid_step
  double grid_step = 0.0;
  int depth = 0;
  std::vector<CoverageRow> rows;
};

CoverageRecord thickness_coverage(const SkewSystem& system, double x0,
                                  double x1, double grid_step, int depth);

}  // namespace skewsim
