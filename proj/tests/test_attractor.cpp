#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "skewsim/attractor.hpp"
#include "skewsim/rng.hpp"

using namespace skewsim;

namespace {

SkewSystem default_sys() { return make_default_step_system(); }
SkewSystem bony_sys() { return make_bony_perturbation(make_default_step_system(), 2); }

}  // namespace

TEST_CASE("pullback boxes are nested") {
  const SkewSystem sys = default_sys();
  for (int s = 0; s < 10; ++s) {
    const SymbolWindow w = sample_bernoulli(2, 100, 0, 500 + s);
    FiberBox prev = pullback_fiber(sys, w, 0);
    CHECK(prev.lo == 0.0);
    CHECK(prev.hi == 1.0);
    for (int n = 1; n <= 100; ++n) {
      const FiberBox cur = pullback_fiber(sys, w, n);
      CHECK(cur.lo >= prev.lo - 1e-15);
      CHECK(cur.hi <= prev.hi + 1e-15);
      prev = cur;
    }
  }
}

TEST_CASE("pullback boxes are equivariant") {
  for (const SkewSystem& sys : {default_sys(), bony_sys()}) {
    const int r = sys.window_radius();
    for (int s = 0; s < 5; ++s) {
      const SymbolWindow w = sample_bernoulli(2, 80, r + 1, 900 + s);
      const IntervalMap& g = sys.fiber_map(w);
      for (int n : {1, 10, 40}) {
        const FiberBox a = pullback_fiber(sys, w, n);
        const FiberBox b = pullback_fiber(sys, shift(w), n + 1);
        CHECK(g.value(a.lo) == doctest::Approx(b.lo).epsilon(1e-13));
        CHECK(g.value(a.hi) == doctest::Approx(b.hi).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("graph values over constant windows hit the fixed points") {
  const SkewSystem sys = default_sys();
  const FiberClass c0 = graph_value(sys, SymbolWindow::constant(2, 0), 1000, 1e-10);
  CHECK(c0.kind == FiberKind::Point);
  CHECK(c0.value == doctest::Approx(0.3).epsilon(1e-4));
  const FiberClass c1 = graph_value(sys, SymbolWindow::constant(2, 1), 1000, 1e-10);
  CHECK(c1.kind == FiberKind::Point);
  CHECK(c1.value == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("graph value depends only on the past") {
  const SkewSystem sys = default_sys();
  const SymbolWindow a(2, -6, {1, 0, 1, 1, 0, 1, 0, 1}, Tail::constant(0),
                       Tail::unspecified());
  const SymbolWindow b(2, -6, {1, 0, 1, 1, 0, 1, 1, 0}, Tail::constant(0),
                       Tail::constant(1));
  const FiberClass ca = graph_value(sys, a, 500, 1e-10);
  const FiberClass cb = graph_value(sys, b, 500, 1e-10);
  CHECK(ca.kind == FiberKind::Point);
  CHECK(ca.value == cb.value);
}

TEST_CASE("bernoulli fibers of the default system resolve to points") {
  const SkewSystem sys = default_sys();
  const CensusRecord rec = bone_census(sys, 100, 200, 1e-4, 77);
  CHECK(rec.points == 100);
  CHECK(rec.bones == 0);
  for (const auto& row : rec.rows) CHECK(row.cls.width < 1e-10);
}

TEST_CASE("invariance residual is tiny on point fibers") {
  const SkewSystem sys = default_sys();
  for (int s = 0; s < 20; ++s) {
    const SymbolWindow w = sample_bernoulli(2, 200, 1, 31 + s);
    CHECK(invariance_residual(sys, w, 200) < 1e-9);
  }
}

TEST_CASE("invariance containment defect vanishes") {
  for (const SkewSystem& sys : {default_sys(), bony_sys()}) {
    const SymbolWindow w = sample_bernoulli(2, 100, sys.window_radius() + 1, 3);
    CHECK(invariance_containment(sys, w, 60) < 1e-12);
  }
}

TEST_CASE("bony system: the all-zero fiber is a bone over U") {
  const FiberClass cls =
      graph_value(bony_sys(), SymbolWindow::constant(2, 0), 1000, 1e-10);
  CHECK(cls.kind == FiberKind::Bone);
  CHECK(cls.lo == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(cls.hi == doctest::Approx(0.35).epsilon(1e-3));
  CHECK(cls.width == doctest::Approx(0.1).epsilon(1e-2));
}

TEST_CASE("bony system: residual requests on bones throw") {
  CHECK_THROWS_AS(
      invariance_residual(bony_sys(), SymbolWindow::constant(2, 0), 200),
      BoneFiberError);
}

TEST_CASE("targeted windows between zero tails stay bones") {
  const SkewSystem bony = bony_sys();
  std::vector<SymbolWindow> windows;
  for (int v = 0; v < 8; ++v)
    windows.emplace_back(2, -3, std::vector<int>{(v >> 2) & 1, (v >> 1) & 1, v & 1},
                         Tail::constant(0), Tail::constant(0));
  const CensusRecord rec = targeted_census(bony, windows, 500, 1e-4);
  CHECK(rec.bones == 8);
  for (const auto& row : rec.rows) CHECK(row.cls.width > 0.01);
}

TEST_CASE("bony system: bernoulli fibers are almost surely points") {
  const CensusRecord rec = bone_census(bony_sys(), 100, 200, 1e-4, 13);
  CHECK(rec.points == 100);
}

TEST_CASE("bone closure witness") {
  const SkewSystem bony = bony_sys();
  const SymbolWindow w(2, -5, {1, 1, 0, 1, 1}, Tail::constant(0),
                       Tail::constant(0));
  const FiberClass cls = graph_value(bony, w, 1000, 1e-10);
  REQUIRE(cls.kind == FiberKind::Bone);
  const double x = cls.hi - 0.05 * cls.width;
  const WitnessResult res = bone_closure_witness(bony, w, x, 5, 0.005, 10000);
  CHECK(res.success);
  CHECK(res.fiber_distance < 0.005);
  CHECK(res.base_distance < 0.05);
  CHECK(in_cylinder(res.witness, w, 5));
  // the witness fiber really is a graph point of the same system
  const FiberClass wc = graph_value(bony, res.witness, 20000, 1e-10);
  CHECK(wc.kind == FiberKind::Point);
  CHECK(wc.value == doctest::Approx(res.gamma).epsilon(1e-12));
}

TEST_CASE("backward coding maintains the membership invariant") {
  const SkewSystem sys = default_sys();
  const double x0 = 0.35, x1 = 0.65;
  Rng rng(2024);
  for (int s = 0; s < 10; ++s) {
    const double x = x0 + (x1 - x0) * rng.next_double();
    const auto code = backward_code(sys, x, x0, x1, 40);
    REQUIRE(code.size() == 40);
    // explicit forward re-check of x in f_{w-1} o ... o f_{w-j}(B)
    for (int j = 1; j <= 40; ++j) {
      double lo = x0, hi = x1;
      for (int t = j; t >= 1; --t) {
        const IntervalMap& m = sys.step_maps()[static_cast<std::size_t>(code[t - 1])];
        lo = m.value(lo);
        hi = m.value(hi);
      }
      CHECK(x >= lo - 1e-12);
      CHECK(x <= hi + 1e-12);
    }
  }
}

TEST_CASE("backward coding prefers symbol 0 on ties") {
  const SkewSystem sys = default_sys();
  // 0.5 lies in both map images of B, so the greedy choice must be 0
  const auto code = backward_code(sys, 0.5, 0.35, 0.65, 1);
  CHECK(code[0] == 0);
}

TEST_CASE("thickness coverage certifies the covering interval") {
  const CoverageRecord rec = thickness_coverage(default_sys(), 0.35, 0.65,
                                                0.01, 2000);
  CHECK(rec.coverage == 1.0);
  CHECK(rec.rows.size() == 31);
  std::vector<double> widths;
  for (const auto& r : rec.rows) widths.push_back(r.width());
  std::sort(widths.begin(), widths.end());
  CHECK(widths[widths.size() / 2] < 1e-3);
}
