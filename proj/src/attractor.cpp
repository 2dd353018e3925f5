#include "skewsim/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "skewsim/rng.hpp"

namespace skewsim {

namespace {

// Limit of h^n(x0). Plain iteration first, then a bracket-guarded Newton
// phase on the drift h(x) - x that never crosses to the far side of the
// nearest fixed point, which keeps plateaus of fixed points intact and
// resolves tangential fixed points well past the reach of pure iteration.
double iterate_to_fixed(const IntervalMap& h, double x0) {
  double x = x0;
  for (int i = 0; i < 500; ++i) {
    const double nx = h.value(x);
    if (nx == x) return x;
    x = nx;
  }
  constexpr double drift_tol = 1e-15;
  for (int i = 0; i < 300; ++i) {
    const double d = h.value(x) - x;
    if (std::fabs(d) <= drift_tol) break;
    const double s = d > 0.0 ? 1.0 : -1.0;
    const double dp = h.deriv1(x) - 1.0;
    double cand = (dp < -1e-18) ? x - d / dp : h.value(x);
    bool ok = false;
    bool done = false;
    for (int halve = 0; halve < 60; ++halve) {
      if (cand >= 0.0 && cand <= 1.0) {
        const double dc = h.value(cand) - cand;
        if (std::fabs(dc) <= drift_tol) {
          x = cand;
          done = true;
          break;
        }
        if (s * dc > 0.0) {
          ok = true;
          break;
        }
      }
      cand = 0.5 * (x + cand);
    }
    if (done || !ok) break;
    if (std::fabs(cand - x) < 1e-16) {
      x = cand;
      break;
    }
    x = cand;
  }
  return x;
}

bool future_side_ok(const SkewSystem& system, const SymbolWindow& w) {
  const int r = system.window_radius();
  if (r == 0) return true;
  if (w.future_tail().kind == TailKind::ConstantSymbol) return true;
  return w.rightmost() >= static_cast<long>(r) - 1;
}

}  // namespace

FiberBox pullback_fiber(const SkewSystem& system, const SymbolWindow& w, int n) {
  if (n < 0) throw std::invalid_argument("pullback depth must be >= 0");
  double lo = 0.0, hi = 1.0;
  for (int j = n; j >= 1; --j) {
    const IntervalMap& m = system.fiber_map_at(w, -j);
    lo = m.value(lo);
    hi = m.value(hi);
  }
  return {n, lo, hi};
}

FiberClass graph_value(const SkewSystem& system, const SymbolWindow& w,
                       int max_depth, double tol, double eps_bone) {
  const int r = system.window_radius();
  FiberClass cls;
  if (!future_side_ok(system, w)) return cls;

  if (w.past_tail().kind == TailKind::ConstantSymbol) {
    const int s = w.past_tail().symbol;
    const long lm = w.symbols().empty() ? w.offset() : w.leftmost();
    const long j0 = std::max<long>(1, static_cast<long>(r) - lm + 1);
    const IntervalMap& tail_map =
        system.fiber_map(SymbolWindow::constant(w.alphabet_size(), s));
    double lo = iterate_to_fixed(tail_map, 0.0);
    double hi = iterate_to_fixed(tail_map, 1.0);
    const double residual = std::max(std::fabs(tail_map.value(lo) - lo),
                                     std::fabs(tail_map.value(hi) - hi));
    for (long j = j0 - 1; j >= 1; --j) {
      const IntervalMap& m = system.fiber_map_at(w, -j);
      lo = m.value(lo);
      hi = m.value(hi);
    }
    if (hi < lo) std::swap(lo, hi);
    cls.lo = lo;
    cls.hi = hi;
    cls.width = hi - lo;
    cls.residual = residual;
    cls.depth = static_cast<int>(j0);
    if (cls.width <= eps_bone) {
      cls.kind = FiberKind::Point;
      cls.value = 0.5 * (lo + hi);
    } else {
      cls.kind = FiberKind::Bone;
    }
    return cls;
  }

  const long avail = -w.leftmost() - static_cast<long>(r);
  const int depth = static_cast<int>(std::min<long>(max_depth, avail));
  if (depth < 1) return cls;

  const FiberBox box = pullback_fiber(system, w, depth);
  cls.lo = box.lo;
  cls.hi = box.hi;
  cls.width = box.width();
  cls.residual = cls.width;
  cls.depth = depth;
  if (cls.width < tol) {
    cls.kind = FiberKind::Point;
    cls.value = 0.5 * (box.lo + box.hi);
    return cls;
  }
  if (depth > 60 && cls.width > eps_bone) {
    const FiberBox prev = pullback_fiber(system, w, depth - 50);
    const double shrink = prev.width() - cls.width;
    if (shrink < 50.0 * 1e-6 * cls.width) cls.kind = FiberKind::Bone;
  }
  return cls;
}

double invariance_residual(const SkewSystem& system, const SymbolWindow& w,
                           int depth, double tol) {
  const FiberClass a = graph_value(system, w, depth, tol);
  if (a.kind == FiberKind::Bone) throw BoneFiberError();
  if (a.kind != FiberKind::Point)
    throw std::runtime_error("fiber not resolved to a point at this depth");
  const FiberClass b = graph_value(system, shift(w), depth + 1, tol);
  if (b.kind == FiberKind::Bone) throw BoneFiberError();
  if (b.kind != FiberKind::Point)
    throw std::runtime_error("shifted fiber not resolved at this depth");
  const IntervalMap& g = system.fiber_map(w);
  return std::fabs(g.value(a.value) - b.value);
}

double invariance_containment(const SkewSystem& system, const SymbolWindow& w,
                              int depth) {
  const FiberBox a = pullback_fiber(system, w, depth);
  const FiberBox b = pullback_fiber(system, shift(w), depth + 1);
  const IntervalMap& g = system.fiber_map(w);
  const double lo_defect = b.lo - g.value(a.lo);
  const double hi_defect = g.value(a.hi) - b.hi;
  return std::max({0.0, lo_defect, hi_defect});
}

CensusRecord bone_census(const SkewSystem& system, int n_samples,
                         int past_depth, double eps_bone, std::uint64_t seed) {
  if (n_samples < 0) throw std::invalid_argument("n_samples must be >= 0");
  CensusRecord rec;
  rec.n_samples = n_samples;
  rec.past_depth = past_depth;
  rec.eps_bone = eps_bone;
  rec.seed = seed;
  const int r = system.window_radius();
  rec.rows.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    const SymbolWindow w = sample_bernoulli(system.alphabet_size(), past_depth,
                                            r, sample_seed(seed, i));
    FiberClass cls = graph_value(system, w, past_depth, 1e-10, eps_bone);
    switch (cls.kind) {
      case FiberKind::Point: ++rec.points; break;
      case FiberKind::Bone: ++rec.bones; break;
      case FiberKind::Indeterminate: ++rec.indeterminate; break;
    }
    rec.rows.push_back({w.digest(), cls});
  }
  return rec;
}

CensusRecord targeted_census(const SkewSystem& system,
                             const std::vector<SymbolWindow>& windows,
                             int max_depth, double eps_bone) {
  CensusRecord rec;
  rec.n_samples = static_cast<int>(windows.size());
  rec.past_depth = max_depth;
  rec.eps_bone = eps_bone;
  rec.rows.reserve(windows.size());
  for (const auto& w : windows) {
    FiberClass cls = graph_value(system, w, max_depth, 1e-10, eps_bone);
    switch (cls.kind) {
      case FiberKind::Point: ++rec.points; break;
      case FiberKind::Bone: ++rec.bones; break;
      case FiberKind::Indeterminate: ++rec.indeterminate; break;
    }
    rec.rows.push_back({w.digest(), cls});
  }
  return rec;
}

WitnessResult bone_closure_witness(const SkewSystem& system,
                                   const SymbolWindow& w, double x, int N,
                                   double eps, int depth_budget) {
  if (N < 0) throw std::invalid_argument("cylinder size N must be >= 0");
  if (w.past_tail().kind != TailKind::ConstantSymbol)
    throw std::invalid_argument(
        "bone window must have a constant past tail for the witness search");
  const int k = system.alphabet_size();
  const int r = system.window_radius();
  const long right = std::max<long>({w.rightmost(), N,
                                     static_cast<long>(r) - 1});

  WitnessResult best;
  const int r_min = N + 1;
  for (int R = r_min; R <= depth_budget; ++R) {
    std::vector<int> symbols;
    symbols.reserve(static_cast<std::size_t>(right + R + 1));
    for (long i = -R; i <= right; ++i) symbols.push_back(w.at(i));
    SymbolWindow cand(k, -R, std::move(symbols), Tail::constant(k - 1),
                      w.future_tail());
    const FiberClass cls = graph_value(system, cand, R + r + 2, 1e-12);
    if (cls.kind != FiberKind::Point) continue;
    const double dist = std::fabs(cls.value - x);
    if (dist < best.fiber_distance) {
      best.fiber_distance = dist;
      best.gamma = cls.value;
      best.witness = cand;
      best.splice_depth = R;
      best.base_distance = base_distance(cand, w).value;
    }
    if (dist <= eps) break;
  }
  best.success = best.fiber_distance <= eps;
  return best;
}

std::vector<int> backward_code(const SkewSystem& system, double x, double x0,
                               double x1, int n) {
  if (!system.is_step())
    throw std::invalid_argument("backward coding requires a step system");
  if (!(x0 < x1) || x < x0 || x > x1)
    throw std::invalid_argument("need x in [x0, x1] with x0 < x1");
  const auto& maps = system.step_maps();
  constexpr double slack = 1e-12;
  std::vector<int> code;
  code.reserve(static_cast<std::size_t>(n));
  double y = x;
  for (int j = 0; j < n; ++j) {
    int chosen = -1;
    for (int s = 0; s < static_cast<int>(maps.size()); ++s) {
      if (maps[s].value(x0) <= y + slack && y <= maps[s].value(x1) + slack) {
        chosen = s;
        break;
      }
    }
    if (chosen < 0)
      throw std::runtime_error(
          "no admissible symbol: the maps do not cover this point");
    code.push_back(chosen);
    y = std::clamp(maps[chosen].inverse(std::clamp(y, maps[chosen].value(0.0),
                                                   maps[chosen].value(1.0))),
                   x0, x1);
  }
  return code;
}

CoverageRecord thickness_coverage(const SkewSystem& system, double x0,
                                  double x1, double grid_step, int depth) {
  if (!(grid_step > 0.0)) throw std::invalid_argument("grid_step must be > 0");
  CoverageRecord rec;
  rec.grid_step = grid_step;
  rec.depth = depth;
  const auto& maps = system.step_maps();
  int covered = 0;
  for (double x = x0; x <= x1 + 0.5 * grid_step; x += grid_step) {
    const double xc = std::min(x, x1);
    const std::vector<int> code = backward_code(system, xc, x0, x1, depth);
    double lo = x0, hi = x1;
    for (int j = depth; j >= 1; --j) {
      const IntervalMap& m = maps[static_cast<std::size_t>(code[j - 1])];
      lo = m.value(lo);
      hi = m.value(hi);
    }
    rec.rows.push_back({xc, lo, hi});
    if (hi - lo <= grid_step) ++covered;
  }
  rec.coverage = rec.rows.empty()
                     ? 0.0
                     : static_cast<double>(covered) / rec.rows.size();
  return rec;
}

}  // namespace skewsim
