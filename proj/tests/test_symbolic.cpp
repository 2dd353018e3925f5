#include <doctest.h>

#include <nlohmann/json.hpp>

#include "skewsim/symbolic.hpp"

using namespace skewsim;

TEST_CASE("constant window is defined everywhere") {
  const SymbolWindow w = SymbolWindow::constant(2, 1);
  CHECK(w.at(-1000) == 1);
  CHECK(w.at(0) == 1);
  CHECK(w.at(755) == 1);
  CHECK(w.totally_defined());
}

TEST_CASE("window indexing and tails") {
  const SymbolWindow w(2, -2, {1, 0, 1}, Tail::constant(0), Tail::unspecified());
  CHECK(w.at(-2) == 1);
  CHECK(w.at(-1) == 0);
  CHECK(w.at(0) == 1);
  CHECK(w.at(-57) == 0);
  CHECK_THROWS_AS(w.at(1), OutOfWindowError);
  CHECK(w.is_defined(-3));
  CHECK(!w.is_defined(2));
}

TEST_CASE("shift semantics") {
  const SymbolWindow w(2, -2, {1, 0, 1, 1}, Tail::constant(0), Tail::unspecified());
  const SymbolWindow s = shift(w);
  for (long i = -3; i <= 0; ++i) CHECK(s.at(i) == w.at(i + 1));
  const SymbolWindow back = inverse_shift(s);
  CHECK(back == w);
  CHECK(w.shifted(3).offset() == w.offset() - 3);
}

TEST_CASE("base distance") {
  const SymbolWindow a(2, -3, {0, 1, 0, 1, 1, 0, 0}, Tail::constant(0),
                       Tail::constant(0));
  SUBCASE("identical sequences have distance zero") {
    const BaseDistance d = base_distance(a, a);
    CHECK(d.value == 0.0);
    CHECK(!d.bound_only);
  }
  SUBCASE("mismatch at the origin") {
    SymbolWindow b(2, -3, {0, 1, 0, 0, 1, 0, 0}, Tail::constant(0),
                   Tail::constant(0));
    const BaseDistance d = base_distance(a, b);
    CHECK(d.value == 1.0);
    CHECK(!d.bound_only);
  }
  SUBCASE("first mismatch at |i| = 3") {
    SymbolWindow b(2, -3, {1, 1, 0, 1, 1, 0, 0}, Tail::constant(0),
                   Tail::constant(0));
    const BaseDistance d = base_distance(a, b);
    CHECK(d.value == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(!d.bound_only);
  }
  SUBCASE("agreement up to an unspecified tail gives a bound") {
    SymbolWindow b(2, -3, {0, 1, 0, 1, 1, 0, 0});
    const BaseDistance d = base_distance(a, b);
    CHECK(d.bound_only);
    CHECK(d.value == doctest::Approx(1.0 / 16).epsilon(1e-15));
  }
  SUBCASE("a definite mismatch beats an unknown at the same level") {
    // at |i| = 4: b undefined at -4 but a definite mismatch at +4 decides
    SymbolWindow b(2, -3, {0, 1, 0, 1, 1, 0, 0, 1});  // index 4 is 1, a has 0
    const BaseDistance d = base_distance(a, b);
    CHECK(d.value == doctest::Approx(1.0 / 16).epsilon(1e-15));
    CHECK(!d.bound_only);
  }
}

TEST_CASE("alphabet mismatch is rejected") {
  const SymbolWindow a = SymbolWindow::constant(2, 0);
  const SymbolWindow b = SymbolWindow::constant(3, 0);
  CHECK_THROWS_AS(base_distance(a, b), AlphabetMismatchError);
}

TEST_CASE("bernoulli sampling is deterministic and in range") {
  const SymbolWindow a = sample_bernoulli(2, 50, 10, 99);
  const SymbolWindow b = sample_bernoulli(2, 50, 10, 99);
  const SymbolWindow c = sample_bernoulli(2, 50, 10, 100);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a.leftmost() == -50);
  CHECK(a.rightmost() == 10);
  for (long i = -50; i <= 10; ++i) {
    CHECK(a.at(i) >= 0);
    CHECK(a.at(i) < 2);
  }
  CHECK(a.past_tail().kind == TailKind::Unspecified);
}

TEST_CASE("sampled symbols are roughly balanced") {
  int ones = 0, total = 0;
  for (int s = 0; s < 50; ++s) {
    const SymbolWindow w = sample_bernoulli(2, 100, 0, 1234 + s);
    for (long i = -100; i <= 0; ++i, ++total) ones += w.at(i);
  }
  const double frac = static_cast<double>(ones) / total;
  CHECK(frac > 0.45);
  CHECK(frac < 0.55);
}

TEST_CASE("cylinder membership") {
  const SymbolWindow a(2, -6, {0, 0, 0, 1, 0, 1, 1, 0, 1}, Tail::constant(0),
                       Tail::constant(0));
  SymbolWindow b(2, -2, {0, 1, 1, 0, 1}, Tail::constant(1), Tail::constant(0));
  CHECK(in_cylinder(b, a, 2));
  CHECK(!in_cylinder(b, a, 4));  // b's past tail is 1, a has 0 at -4
}

TEST_CASE("digest is stable and content-sensitive") {
  const SymbolWindow a(2, -1, {1, 0}, Tail::constant(0), Tail::unspecified());
  const SymbolWindow b(2, -1, {1, 1}, Tail::constant(0), Tail::unspecified());
  CHECK(a.digest() == a.digest());
  CHECK(a.digest() != b.digest());
}

TEST_CASE("json round trip") {
  const SymbolWindow w(2, -4, {1, 0, 0, 1, 1}, Tail::constant(0),
                       Tail::unspecified());
  nlohmann::json j = w;
  const auto back = j.get<SymbolWindow>();
  CHECK(back == w);
}
