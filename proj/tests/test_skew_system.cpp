#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "skewsim/skew_system.hpp"

using namespace skewsim;

TEST_CASE("step system dispatches on the centre symbol") {
  const SkewSystem sys = make_default_step_system();
  CHECK(sys.is_step());
  CHECK(sys.alphabet_size() == 2);
  const SymbolWindow w(2, -1, {1, 0, 1}, Tail::constant(0), Tail::constant(0));
  CHECK(sys.fiber_map(w).value(0.3) == doctest::Approx(0.3).epsilon(1e-15));   // symbol 0
  CHECK(sys.fiber_map_at(w, -1).value(0.3) == doctest::Approx(0.46).epsilon(1e-15));
  CHECK(sys.fiber_map_at(w, 1).value(0.35) == doctest::Approx(0.49).epsilon(1e-15));
  CHECK(sys.fiber_map_at(w, -10).value(0.3) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("windowed rule applies the override only on its pattern") {
  const SkewSystem bony = make_bony_perturbation(make_default_step_system(), 2);
  CHECK(!bony.is_step());
  CHECK(bony.window_radius() == 2);
  const SymbolWindow zeros = SymbolWindow::constant(2, 0);
  // identity on the core of U under the override
  CHECK(bony.fiber_map(zeros).value(0.27) == doctest::Approx(0.27).epsilon(1e-15));
  // any 1 in the window falls back to the step map of the centre symbol
  const SymbolWindow mixed(2, -2, {0, 0, 0, 0, 1}, Tail::constant(0),
                           Tail::constant(0));
  const IntervalMap f0 = IntervalMap::cubic_pinned(0.3, 0.5);
  CHECK(bony.fiber_map(mixed).value(0.27) == f0.value(0.27));
  CHECK(bony.fiber_map(mixed).value(0.27) != 0.27);
}

TEST_CASE("pattern codes are base-k, leftmost first") {
  const SkewSystem bony = make_bony_perturbation(make_default_step_system(), 2);
  const SymbolWindow w(2, -2, {1, 0, 0, 0, 1}, Tail::constant(0),
                       Tail::constant(0));
  CHECK(bony.pattern_code(w, 0) == 0b10001);
  CHECK(bony.pattern_code(SymbolWindow::constant(2, 0), 0) == 0);
  CHECK(bony.pattern_code(SymbolWindow::constant(2, 1), 0) == 0b11111);
}

TEST_CASE("forward orbit follows the symbols") {
  const SkewSystem sys = make_default_step_system();
  const SymbolWindow ones = SymbolWindow::constant(2, 1);
  const auto orbit = forward_orbit(sys, ones, 0.2, 4);
  REQUIRE(orbit.size() == 5);
  // affine orbit has the closed form 0.7 + 0.6^n (x - 0.7)
  for (int n = 0; n <= 4; ++n)
    CHECK(orbit[static_cast<std::size_t>(n)] ==
          doctest::Approx(0.7 + std::pow(0.6, n) * (0.2 - 0.7)).epsilon(1e-14));
}

TEST_CASE("condition report for the default system") {
  const ConditionReport rep = check_conditions(make_default_step_system(), 4000);
  CHECK(rep.into_interval.pass);
  CHECK(rep.weak_contraction_f0.pass);
  CHECK(rep.uniform_contraction.pass);
  CHECK(rep.contraction_on_average.pass);
  CHECK(rep.fixed_points.pass);
  CHECK(rep.covering.pass);
  CHECK(rep.all_pass());
  const double sup_prod =
      rep.contraction_on_average.witness.at("sup_product").get<double>();
  CHECK(sup_prod <= 0.6 + 1e-12);
  const double margin = rep.covering.witness.at("overlap_margin").get<double>();
  CHECK(margin >= 0.13);
}

TEST_CASE("condition report flags a violating system") {
  // two uniform contractions: the first map is not a weak contraction with
  // unit derivative at its fixed point
  const SkewSystem sys(2, StepRule{{IntervalMap::affine(0.3, 0.6),
                                    IntervalMap::affine(0.7, 0.6)}});
  const ConditionReport rep = check_conditions(sys, 1000);
  CHECK(!rep.weak_contraction_f0.pass);
  CHECK(!rep.all_pass());
}

TEST_CASE("C2 distance") {
  const SkewSystem F = make_default_step_system();
  SUBCASE("identical systems are at distance zero") {
    CHECK(dist_c2(F, F) == 0.0);
  }
  SUBCASE("the shifted family hits its target distance") {
    for (double target : {0.04, 0.02, 0.01}) {
      const SkewSystem G = make_shifted_step_system(target);
      CHECK(dist_c2(F, G) == doctest::Approx(target).epsilon(1e-9));
    }
  }
  SUBCASE("symmetry") {
    const SkewSystem G = make_shifted_step_system(0.02);
    CHECK(dist_c2(F, G) == doctest::Approx(dist_c2(G, F)).epsilon(1e-12));
  }
}

TEST_CASE("base lipschitz estimate is finite and nonnegative") {
  const SkewSystem bony = make_bony_perturbation(make_default_step_system(), 2);
  const double lip = estimate_base_lipschitz(bony, 200, 5);
  CHECK(lip >= 0.0);
  CHECK(std::isfinite(lip));
  // the step system's rule depends on the base, so the constant is positive
  CHECK(estimate_base_lipschitz(make_default_step_system(), 200, 5) > 0.0);
}

TEST_CASE("system json round trip") {
  const SkewSystem F = make_default_step_system();
  const SkewSystem bony = make_bony_perturbation(F, 2);
  for (const SkewSystem* s : {&F, &bony}) {
    nlohmann::json j = *s;
    const auto back = j.get<SkewSystem>();
    CHECK(nlohmann::json(back) == j);
    const SymbolWindow zeros = SymbolWindow::constant(2, 0);
    CHECK(back.fiber_map(zeros).value(0.4) == s->fiber_map(zeros).value(0.4));
  }
}
