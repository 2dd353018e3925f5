#pragma once

// Strictly increasing C^2 self-maps of [0,1]: the cubic weak contraction,
// affine uniform contractions, a C^2 identity blend used for bony
// perturbations, and compositions. All derivatives are analytic.

#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace skewsim {

class IntervalMap;

// x -> x - a (x - p)^3 ; weakly contracting with Df(p) = 1.
struct CubicPinned {
  double p = 0.0;
  double a = 0.0;
};

// x -> p + c (x - p) ; uniformly contracting for 0 < c < 1.
struct Affine {
  double p = 0.0;
  double c = 0.0;
};

// Identity on [lo, hi], `base` outside [lo - width, hi + width], quintic
// smoothstep blend in between (C^2 everywhere).
struct Blended {
  std::shared_ptr<const IntervalMap> base;
  double lo = 0.0;
  double hi = 0.0;
  double width = 0.0;
};

// Maps applied left to right: Composition{m1, m2}(x) = m2(m1(x)).
struct Composition {
  std::vector<IntervalMap> maps;
};

class IntervalMap {
 public:
  using Repr = std::variant<CubicPinned, Affine, Blended, Composition>;

  IntervalMap() : repr_(Affine{0.5, 0.5}) {}
  IntervalMap(Repr repr) : repr_(std::move(repr)) {}

  static IntervalMap cubic_pinned(double p, double a) { return IntervalMap(CubicPinned{p, a}); }
  static IntervalMap affine(double p, double c) { return IntervalMap(Affine{p, c}); }
  static IntervalMap blended(IntervalMap base, double lo, double hi, double width);
  static IntervalMap composition(std::vector<IntervalMap> maps) {
    return IntervalMap(Composition{std::move(maps)});
  }

  const Repr& repr() const { return repr_; }

  double value(double x) const;
  double deriv1(double x) const;
  double deriv2(double x) const;
  double derivative(double x, int order) const;

  // Unique x in [0,1] with value(x) = y; bisection plus Newton polish.
  // Throws std::domain_error if y is outside the image of [0,1].
  double inverse(double y) const;

  // Grid check of the IntervalMap invariants: image strictly inside (0,1),
  // positive derivative, inverse consistency. Throws on violation.
  void validate(int grid = 1000) const;

  bool operator==(const IntervalMap& other) const;

 private:
  Repr repr_;
};

inline double evaluate(const IntervalMap& m, double x) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("x outside [0,1]");
  return m.value(x);
}

inline double derivative(const IntervalMap& m, double x, int order) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("x outside [0,1]");
  return m.derivative(x, order);
}

inline double inverse(const IntervalMap& m, double y) { return m.inverse(y); }

void to_json(nlohmann::json& j, const IntervalMap& m);
void from_json(const nlohmann::json& j, IntervalMap& m);

}  // namespace skewsim
