#include "skewsim/skew_system.hpp"

#include <algorithm>
#include <cmath>

#include "skewsim/rng.hpp"

namespace skewsim {

SkewSystem::SkewSystem(int k, StepRule rule, nlohmann::json metadata)
    : k_(k), step_(std::move(rule)), metadata_(std::move(metadata)) {
  if (k_ < 1) throw std::invalid_argument("alphabet size must be >= 1");
  if (static_cast<int>(step_.maps.size()) != k_)
    throw std::invalid_argument("step rule needs one map per symbol");
}

SkewSystem::SkewSystem(int k, WindowedRule rule, nlohmann::json metadata)
    : k_(k), windowed_(std::move(rule)), metadata_(std::move(metadata)) {
  if (k_ < 1) throw std::invalid_argument("alphabet size must be >= 1");
  if (windowed_->radius < 0) throw std::invalid_argument("radius must be >= 0");
  if (static_cast<int>(windowed_->step_maps.size()) != k_)
    throw std::invalid_argument("windowed rule needs one fallback map per symbol");
}

const WindowedRule& SkewSystem::windowed_rule() const {
  if (!windowed_) throw std::logic_error("not a windowed system");
  return *windowed_;
}

std::uint64_t SkewSystem::pattern_code(const SymbolWindow& w, long center) const {
  const int r = window_radius();
  std::uint64_t code = 0;
  for (long i = center - r; i <= center + r; ++i)
    code = code * static_cast<std::uint64_t>(k_) +
           static_cast<std::uint64_t>(w.at(i));
  return code;
}

const IntervalMap& SkewSystem::fiber_map_at(const SymbolWindow& w,
                                            long center) const {
  if (w.alphabet_size() != k_) throw AlphabetMismatchError();
  if (!windowed_) return step_.maps[static_cast<std::size_t>(w.at(center))];
  const std::uint64_t code = pattern_code(w, center);
  for (const auto& [pat, map] : windowed_->overrides) {
    if (pat == code) return map;
  }
  return windowed_->step_maps[static_cast<std::size_t>(w.at(center))];
}

std::vector<double> forward_orbit(const SkewSystem& system,
                                  const SymbolWindow& w, double x, int n) {
  std::vector<double> orbit;
  orbit.reserve(static_cast<std::size_t>(n) + 1);
  orbit.push_back(x);
  for (int j = 0; j < n; ++j) {
    x = system.fiber_map_at(w, j).value(x);
    orbit.push_back(x);
  }
  return orbit;
}

SkewSystem make_default_step_system() {
  StepRule rule;
  rule.maps.push_back(IntervalMap::cubic_pinned(0.3, 0.5));
  rule.maps.push_back(IntervalMap::affine(0.7, 0.6));
  nlohmann::json meta{{"name", "default"},
                      {"B", {0.35, 0.65}},
                      {"fixed_points", {0.3, 0.7}}};
  return SkewSystem(2, std::move(rule), std::move(meta));
}

SkewSystem make_bony_perturbation(const SkewSystem& base, int m, double u_lo,
                                  double u_hi, double transition) {
  if (!base.is_step() || base.alphabet_size() != 2)
    throw std::invalid_argument("bony perturbation expects the k=2 step system");
  if (!(0.0 < u_lo - transition) || !(u_lo < u_hi))
    throw std::invalid_argument("U must sit strictly inside (0,1)");

  IntervalMap g =
      IntervalMap::blended(base.step_maps()[0], u_lo, u_hi, transition);
  g.validate(4000);  // throws if the blend lost monotonicity

  WindowedRule rule;
  rule.radius = m;
  rule.step_maps = base.step_maps();
  rule.overrides.emplace_back(0ULL, std::move(g));  // all-zero pattern

  nlohmann::json meta{{"name", "bony"},
                      {"m", m},
                      {"U", {u_lo, u_hi}},
                      {"transition", transition}};
  if (base.metadata().contains("B")) meta["B"] = base.metadata()["B"];
  return SkewSystem(2, std::move(rule), std::move(meta));
}

SkewSystem make_shifted_step_system(double target_dist) {
  const double c = 0.6;
  const double shift = target_dist / (1.0 / c - 1.0);
  StepRule rule;
  rule.maps.push_back(IntervalMap::cubic_pinned(0.3, 0.5));
  rule.maps.push_back(IntervalMap::affine(0.7 + shift, c));
  nlohmann::json meta{{"name", "shifted"},
                      {"B", {0.35, 0.65}},
                      {"target_dist_c2", target_dist}};
  return SkewSystem(2, std::move(rule), std::move(meta));
}

double dist_c2_maps(const IntervalMap& f, const IntervalMap& g, int grid) {
  double d = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    const double dv = std::fabs(f.value(x) - g.value(x)) +
                      std::fabs(f.deriv1(x) - g.deriv1(x)) +
                      std::fabs(f.deriv2(x) - g.deriv2(x));
    d = std::max(d, dv);
  }
  // Inverse branch over the common image.
  const double ylo = std::max(f.value(0.0), g.value(0.0));
  const double yhi = std::min(f.value(1.0), g.value(1.0));
  if (ylo < yhi) {
    for (int i = 0; i <= grid; ++i) {
      const double y = ylo + (yhi - ylo) * static_cast<double>(i) / grid;
      const double xf = f.inverse(y);
      const double xg = g.inverse(y);
      const double f1 = f.deriv1(xf), g1 = g.deriv1(xg);
      const double f2 = f.deriv2(xf), g2 = g.deriv2(xg);
      const double dv = std::fabs(xf - xg) + std::fabs(1.0 / f1 - 1.0 / g1) +
                        std::fabs(f2 / (f1 * f1 * f1) - g2 / (g1 * g1 * g1));
      d = std::max(d, dv);
    }
  }
  return d;
}

double dist_c2(const SkewSystem& F, const SkewSystem& G,
               const std::vector<SymbolWindow>& sample_windows, int grid) {
  if (F.alphabet_size() != G.alphabet_size()) throw AlphabetMismatchError();
  double d = 0.0;
  for (const auto& w : sample_windows)
    d = std::max(d, dist_c2_maps(F.fiber_map(w), G.fiber_map(w), grid));
  return d;
}

double dist_c2(const SkewSystem& F, const SkewSystem& G, int n_windows,
               int grid, std::uint64_t seed) {
  if (F.alphabet_size() != G.alphabet_size()) throw AlphabetMismatchError();
  const int k = F.alphabet_size();
  const int r = std::max(F.window_radius(), G.window_radius());
  std::vector<SymbolWindow> windows;
  for (int s = 0; s < k; ++s) windows.push_back(SymbolWindow::constant(k, s));
  for (int i = 0; i < n_windows; ++i)
    windows.push_back(sample_bernoulli(k, r + 1, r + 1, sample_seed(seed, i)));
  return dist_c2(F, G, windows, grid);
}

namespace {

// Unique solution of f(x) = x for an increasing map with f(0) > 0, f(1) < 1.
double fixed_point(const IntervalMap& f) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f.value(mid) > mid ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

nlohmann::json ConditionReport::to_json() const {
  auto entry = [](const Entry& e) {
    return nlohmann::json{{"pass", e.pass}, {"witness", e.witness}};
  };
  return nlohmann::json{{"grid", grid},
                        {"all_pass", all_pass()},
                        {"into_interval", entry(into_interval)},
                        {"weak_contraction_f0", entry(weak_contraction_f0)},
                        {"uniform_contraction", entry(uniform_contraction)},
                        {"contraction_on_average", entry(contraction_on_average)},
                        {"fixed_points", entry(fixed_points)},
                        {"covering", entry(covering)}};
}

ConditionReport check_conditions(const SkewSystem& system, int grid) {
  if (!system.is_step())
    throw std::invalid_argument("condition checker is defined for step systems");
  const auto& maps = system.step_maps();
  const int k = system.alphabet_size();
  ConditionReport rep;
  rep.grid = grid;

  // (a) each map brings [0,1] strictly into itself and is increasing.
  {
    bool pass = true;
    nlohmann::json wit = nlohmann::json::array();
    for (int i = 0; i < k; ++i) {
      const double at0 = maps[i].value(0.0);
      const double at1 = maps[i].value(1.0);
      double min_deriv = 1e300;
      for (int jg = 0; jg <= grid; ++jg) {
        const double x = static_cast<double>(jg) / grid;
        min_deriv = std::min(min_deriv, maps[i].deriv1(x));
      }
      const bool ok = at0 > 0.0 && at1 < 1.0 && min_deriv > 0.0;
      pass = pass && ok;
      wit.push_back({{"map", i}, {"f(0)", at0}, {"f(1)", at1},
                     {"min_derivative", min_deriv}});
    }
    rep.into_interval = {pass, wit};
  }

  // (b) f0 weakly contracting: unique fixed point, tangent derivative 1,
  // Df0 < 1 away from it.
  {
    const auto& f0 = maps[0];
    int sign_changes = 0;
    double prev = f0.value(0.0) - 0.0;
    for (int jg = 1; jg <= grid; ++jg) {
      const double x = static_cast<double>(jg) / grid;
      const double cur = f0.value(x) - x;
      if ((prev > 0.0) != (cur > 0.0)) ++sign_changes;
      prev = cur;
    }
    const double p0 = fixed_point(f0);
    const double tangent = f0.deriv1(p0);
    double off_sup = 0.0;
    const double radius = 0.05;
    for (int jg = 0; jg <= grid; ++jg) {
      const double x = static_cast<double>(jg) / grid;
      if (std::fabs(x - p0) >= radius)
        off_sup = std::max(off_sup, f0.deriv1(x));
    }
    const bool pass = sign_changes == 1 && std::fabs(tangent - 1.0) < 1e-9 &&
                      off_sup < 1.0;
    rep.weak_contraction_f0 = {pass,
                               {{"p0", p0},
                                {"Df0_at_p0", tangent},
                                {"sign_changes", sign_changes},
                                {"sup_Df0_off_neighborhood", off_sup},
                                {"neighborhood_radius", radius}}};
  }

  // (c) maps 1..k-1 uniformly contracting.
  {
    bool pass = true;
    nlohmann::json wit = nlohmann::json::array();
    for (int i = 1; i < k; ++i) {
      double sup = 0.0;
      for (int jg = 0; jg <= grid; ++jg) {
        const double x = static_cast<double>(jg) / grid;
        sup = std::max(sup, maps[i].deriv1(x));
      }
      pass = pass && sup < 1.0;
      wit.push_back({{"map", i}, {"sup_derivative", sup}});
    }
    rep.uniform_contraction = {pass, wit};
  }

  // (d) contraction on average: sup_x prod_i Df_i(x) < 1.
  {
    double sup = 0.0, argmax = 0.0;
    for (int jg = 0; jg <= grid; ++jg) {
      const double x = static_cast<double>(jg) / grid;
      double prod = 1.0;
      for (int i = 0; i < k; ++i) prod *= maps[i].deriv1(x);
      if (prod > sup) {
        sup = prod;
        argmax = x;
      }
    }
    rep.contraction_on_average = {sup < 1.0,
                                  {{"sup_product", sup}, {"argmax", argmax}}};
  }

  // (e) fixed points distinct, interior, no-cycle margins.
  {
    std::vector<double> fps(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) fps[static_cast<std::size_t>(i)] = fixed_point(maps[i]);
    bool pass = true;
    double min_sep = 1e300, edge = 1e300, min_margin = 1e300;
    for (int i = 0; i < k; ++i) {
      edge = std::min({edge, fps[i], 1.0 - fps[i]});
      for (int j = 0; j < k; ++j)
        if (i != j) min_sep = std::min(min_sep, std::fabs(fps[i] - fps[j]));
    }
    nlohmann::json margins = nlohmann::json::array();
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        if (i == j) continue;
        const double image = maps[i].value(fps[static_cast<std::size_t>(j)]);
        double margin = 1e300;
        for (int l = 0; l < k; ++l)
          margin = std::min(margin, std::fabs(image - fps[static_cast<std::size_t>(l)]));
        min_margin = std::min(min_margin, margin);
        margins.push_back({{"i", i}, {"j", j}, {"image", image}, {"margin", margin}});
      }
    }
    pass = min_sep > 1e-9 && edge > 1e-9 && min_margin > 1e-9;
    rep.fixed_points = {pass,
                        {{"points", fps},
                         {"min_separation", min_sep},
                         {"min_edge_distance", edge},
                         {"min_no_cycle_margin", min_margin},
                         {"margins", margins}}};
  }

  // (f) covering property on B = (x0, x1) from the system metadata.
  {
    if (k != 2 || !system.metadata().contains("B")) {
      rep.covering = {false, {{"error", "covering check needs k = 2 and metadata B"}}};
    } else {
      const double x0 = system.metadata()["B"][0].get<double>();
      const double x1 = system.metadata()["B"][1].get<double>();
      const double f0x0 = maps[0].value(x0), f0x1 = maps[0].value(x1);
      const double f1x0 = maps[1].value(x0), f1x1 = maps[1].value(x1);
      const double overlap = f0x1 - f1x0;
      double sup0 = 0.0, sup1 = 0.0;
      for (int jg = 0; jg <= grid; ++jg) {
        const double x = x0 + (x1 - x0) * static_cast<double>(jg) / grid;
        sup0 = std::max(sup0, maps[0].deriv1(x));
        sup1 = std::max(sup1, maps[1].deriv1(x));
      }
      const bool pass = f0x0 < x0 && f1x1 > x1 && overlap > 0.0 &&
                        sup0 < 1.0 && sup1 < 1.0;
      rep.covering = {pass,
                      {{"B", {x0, x1}},
                       {"f0(x0)", f0x0},
                       {"f0(x1)", f0x1},
                       {"f1(x0)", f1x0},
                       {"f1(x1)", f1x1},
                       {"overlap_margin", overlap},
                       {"sup_Df0_on_B", sup0},
                       {"sup_Df1_on_B", sup1}}};
    }
  }

  return rep;
}

double estimate_base_lipschitz(const SkewSystem& system, int n_pairs,
                               std::uint64_t seed) {
  const int r = system.window_radius();
  const int depth = r + 2;
  double best = 0.0;
  for (int i = 0; i < n_pairs; ++i) {
    const auto w1 = sample_bernoulli(system.alphabet_size(), depth, depth,
                                     sample_seed(seed, 2 * static_cast<std::uint64_t>(i)));
    const auto w2 = sample_bernoulli(system.alphabet_size(), depth, depth,
                                     sample_seed(seed, 2 * static_cast<std::uint64_t>(i) + 1));
    const auto d = base_distance(w1, w2);
    if (d.value <= 0.0) continue;
    const double num =
        dist_c2_maps(system.fiber_map(w1), system.fiber_map(w2), 128);
    best = std::max(best, num / d.value);
  }
  return best;
}

void to_json(nlohmann::json& j, const SkewSystem& s) {
  nlohmann::json rule;
  if (s.is_step()) {
    nlohmann::json maps = nlohmann::json::array();
    for (const auto& m : s.step_maps()) {
      nlohmann::json jm;
      to_json(jm, m);
      maps.push_back(jm);
    }
    rule = {{"kind", "step"}, {"maps", maps}};
  } else {
    const auto& wr = s.windowed_rule();
    nlohmann::json maps = nlohmann::json::array();
    for (const auto& m : wr.step_maps) {
      nlohmann::json jm;
      to_json(jm, m);
      maps.push_back(jm);
    }
    nlohmann::json overrides = nlohmann::json::array();
    const int len = 2 * wr.radius + 1;
    for (const auto& [code, map] : wr.overrides) {
      std::vector<int> pattern(static_cast<std::size_t>(len));
      std::uint64_t c = code;
      for (int i = len - 1; i >= 0; --i) {
        pattern[static_cast<std::size_t>(i)] =
            static_cast<int>(c % static_cast<std::uint64_t>(s.alphabet_size()));
        c /= static_cast<std::uint64_t>(s.alphabet_size());
      }
      nlohmann::json jm;
      to_json(jm, map);
      overrides.push_back({{"pattern", pattern}, {"map", jm}});
    }
    rule = {{"kind", "windowed"},
            {"radius", wr.radius},
            {"step_maps", maps},
            {"overrides", overrides}};
  }
  j = {{"k", s.alphabet_size()}, {"rule", rule}, {"metadata", s.metadata()}};
}

void from_json(const nlohmann::json& j, SkewSystem& s) {
  const int k = j.at("k").get<int>();
  const auto& rule = j.at("rule");
  const std::string kind = rule.at("kind").get<std::string>();
  nlohmann::json metadata = j.value("metadata", nlohmann::json::object());
  if (kind == "step") {
    StepRule r;
    for (const auto& jm : rule.at("maps")) {
      IntervalMap m;
      from_json(jm, m);
      r.maps.push_back(std::move(m));
    }
    s = SkewSystem(k, std::move(r), std::move(metadata));
  } else if (kind == "windowed") {
    WindowedRule r;
    r.radius = rule.at("radius").get<int>();
    for (const auto& jm : rule.at("step_maps")) {
      IntervalMap m;
      from_json(jm, m);
      r.step_maps.push_back(std::move(m));
    }
    for (const auto& jo : rule.at("overrides")) {
      const auto pattern = jo.at("pattern").get<std::vector<int>>();
      if (static_cast<int>(pattern.size()) != 2 * r.radius + 1)
        throw std::invalid_argument("override pattern length mismatch");
      std::uint64_t code = 0;
      for (int sym : pattern)
        code = code * static_cast<std::uint64_t>(k) + static_cast<std::uint64_t>(sym);
      IntervalMap m;
      from_json(jo.at("map"), m);
      r.overrides.emplace_back(code, std::move(m));
    }
    s = SkewSystem(k, std::move(r), std::move(metadata));
  } else {
    throw std::invalid_argument("unknown rule kind: " + kind);
  }
}

}  // namespace skewsim
