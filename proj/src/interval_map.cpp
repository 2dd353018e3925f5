#include "skewsim/interval_map.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace skewsim {

namespace {

// Quintic smoothstep on [0,1] and its derivatives.
inline double q0(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
inline double q1(double u) { return 30.0 * u * u * (1.0 + u * (-2.0 + u)); }
inline double q2(double u) { return 60.0 * u * (1.0 + u * (-3.0 + 2.0 * u)); }

// Blend weight toward the identity: 1 on [lo,hi], 0 outside [lo-w, hi+w].
struct BlendWeight {
  double s, s1, s2;
};

BlendWeight blend_weight(const Blended& b, double x) {
  if (x >= b.lo && x <= b.hi) return {1.0, 0.0, 0.0};
  if (x <= b.lo - b.width || x >= b.hi + b.width) return {0.0, 0.0, 0.0};
  if (x < b.lo) {
    const double u = (x - (b.lo - b.width)) / b.width;
    return {q0(u), q1(u) / b.width, q2(u) / (b.width * b.width)};
  }
  const double u = ((b.hi + b.width) - x) / b.width;
  return {q0(u), -q1(u) / b.width, q2(u) / (b.width * b.width)};
}

}  // namespace

IntervalMap IntervalMap::blended(IntervalMap base, double lo, double hi,
                                 double width) {
  if (!(width > 0.0) || !(lo < hi))
    throw std::invalid_argument("blended: need lo < hi and width > 0");
  return IntervalMap(Blended{std::make_shared<const IntervalMap>(std::move(base)),
                             lo, hi, width});
}

double IntervalMap::value(double x) const {
  return std::visit(
      [x](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CubicPinned>) {
          const double d = x - r.p;
          return x - r.a * d * d * d;
        } else if constexpr (std::is_same_v<T, Affine>) {
          return r.p + r.c * (x - r.p);
        } else if constexpr (std::is_same_v<T, Blended>) {
          const auto w = blend_weight(r, x);
          const double bx = r.base->value(x);
          return bx + w.s * (x - bx);
        } else {
          double y = x;
          for (const auto& m : r.maps) y = m.value(y);
          return y;
        }
      },
      repr_);
}

double IntervalMap::deriv1(double x) const {
  return std::visit(
      [x](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CubicPinned>) {
          const double d = x - r.p;
          return 1.0 - 3.0 * r.a * d * d;
        } else if constexpr (std::is_same_v<T, Affine>) {
          return r.c;
        } else if constexpr (std::is_same_v<T, Blended>) {
          const auto w = blend_weight(r, x);
          const double bx = r.base->value(x);
          const double b1 = r.base->deriv1(x);
          return b1 + w.s1 * (x - bx) + w.s * (1.0 - b1);
        } else {
          double y = x, d = 1.0;
          for (const auto& m : r.maps) {
            d *= m.deriv1(y);
            y = m.value(y);
          }
          return d;
        }
      },
      repr_);
}

double IntervalMap::deriv2(double x) const {
  return std::visit(
      [x](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CubicPinned>) {
          return -6.0 * r.a * (x - r.p);
        } else if constexpr (std::is_same_v<T, Affine>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, Blended>) {
          const auto w = blend_weight(r, x);
          const double bx = r.base->value(x);
          const double b1 = r.base->deriv1(x);
          const double b2 = r.base->deriv2(x);
          return b2 + w.s2 * (x - bx) + 2.0 * w.s1 * (1.0 - b1) - w.s * b2;
        } else {
          // (g o f)'' = g''(f) f'^2 + g'(f) f'' along the chain.
          double y = x, d1 = 1.0, d2 = 0.0;
          for (const auto& m : r.maps) {
            const double m1 = m.deriv1(y);
            const double m2 = m.deriv2(y);
            d2 = m2 * d1 * d1 + m1 * d2;
            d1 *= m1;
            y = m.value(y);
          }
          return d2;
        }
      },
      repr_);
}

double IntervalMap::derivative(double x, int order) const {
  if (order == 1) return deriv1(x);
  if (order == 2) return deriv2(x);
  throw std::invalid_argument("derivative order must be 1 or 2");
}

double IntervalMap::inverse(double y) const {
  const double y0 = value(0.0);
  const double y1 = value(1.0);
  constexpr double slack = 1e-12;
  if (y < y0 - slack || y > y1 + slack)
    throw std::domain_error("inverse: y outside the image of [0,1]");
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (value(mid) < y ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {  // Newton polish
    const double d = deriv1(x);
    if (d <= 0.0) break;
    const double step = (value(x) - y) / d;
    const double next = x - step;
    if (next < lo || next > hi) break;
    x = next;
  }
  return std::clamp(x, 0.0, 1.0);
}

void IntervalMap::validate(int grid) const {
  if (!(value(0.0) > 0.0) || !(value(1.0) < 1.0))
    throw std::runtime_error("map does not bring [0,1] strictly into itself");
  double prev = value(0.0);
  for (int i = 1; i <= grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    const double y = value(x);
    if (!(y > 0.0) || !(y < 1.0))
      throw std::runtime_error("map image leaves (0,1)");
    if (!(y > prev)) throw std::runtime_error("map is not strictly increasing");
    if (!(deriv1(x) > 0.0))
      throw std::runtime_error("non-positive derivative detected");
    prev = y;
  }
  for (int i = 0; i <= 10; ++i) {
    const double x = static_cast<double>(i) / 10.0;
    if (std::fabs(inverse(value(x)) - x) > 1e-12)
      throw std::runtime_error("inverse inconsistency");
  }
}

bool IntervalMap::operator==(const IntervalMap& other) const {
  nlohmann::json a, b;
  to_json(a, *this);
  to_json(b, other);
  return a == b;
}

void to_json(nlohmann::json& j, const IntervalMap& m) {
  std::visit(
      [&j](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CubicPinned>) {
          j = {{"kind", "cubic_pinned"}, {"p", r.p}, {"a", r.a}};
        } else if constexpr (std::is_same_v<T, Affine>) {
          j = {{"kind", "affine"}, {"p", r.p}, {"c", r.c}};
        } else if constexpr (std::is_same_v<T, Blended>) {
          nlohmann::json base;
          to_json(base, *r.base);
          j = {{"kind", "blended"},
               {"base", base},
               {"lo", r.lo},
               {"hi", r.hi},
               {"width", r.width}};
        } else {
          nlohmann::json maps = nlohmann::json::array();
          for (const auto& mm : r.maps) {
            nlohmann::json jm;
            to_json(jm, mm);
            maps.push_back(jm);
          }
          j = {{"kind", "composition"}, {"maps", maps}};
        }
      },
      m.repr());
}

void from_json(const nlohmann::json& j, IntervalMap& m) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "cubic_pinned") {
    m = IntervalMap::cubic_pinned(j.at("p").get<double>(), j.at("a").get<double>());
  } else if (kind == "affine") {
    m = IntervalMap::affine(j.at("p").get<double>(), j.at("c").get<double>());
  } else if (kind == "blended") {
    IntervalMap base;
    from_json(j.at("base"), base);
    m = IntervalMap::blended(std::move(base), j.at("lo").get<double>(),
                             j.at("hi").get<double>(), j.at("width").get<double>());
  } else if (kind == "composition") {
    std::vector<IntervalMap> maps;
    for (const auto& jm : j.at("maps")) {
      IntervalMap mm;
      from_json(jm, mm);
      maps.push_back(std::move(mm));
    }
    m = IntervalMap::composition(std::move(maps));
  } else {
    throw std::invalid_argument("unknown map kind: " + kind);
  }
}

}  // namespace skewsim
