#include "skewsim/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "skewsim/attractor.hpp"
#include "skewsim/rng.hpp"

namespace skewsim {

namespace {

std::pair<double, double> mean_and_se(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= v.size();
  if (v.size() < 2) return {mean, 0.0};
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= (v.size() - 1);
  return {mean, std::sqrt(var / v.size())};
}

std::vector<const IntervalMap*> orbit_maps(const SkewSystem& system,
                                           const SymbolWindow& w, int n) {
  std::vector<const IntervalMap*> maps(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) maps[static_cast<std::size_t>(t)] = &system.fiber_map_at(w, t);
  return maps;
}

}  // namespace

double log_derivative_sum(const SkewSystem& system, const SymbolWindow& w,
                          double x, int n) {
  double acc = 0.0;
  for (int t = 0; t < n; ++t) {
    const IntervalMap& m = system.fiber_map_at(w, t);
    acc += std::log(m.deriv1(x));
    x = m.value(x);
  }
  return acc;
}

ExponentEstimate sup_norm_exponent(const SkewSystem& system, int n, int x_grid,
                                   int n_samples, std::uint64_t seed) {
  if (n < 1 || x_grid < 1 || n_samples < 1)
    throw std::invalid_argument("sup_norm_exponent: bad parameters");
  const int r = system.window_radius();
  std::vector<double> per_sample;
  per_sample.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    const SymbolWindow w = sample_bernoulli(system.alphabet_size(), r,
                                            n - 1 + r, sample_seed(seed, i));
    const auto maps = orbit_maps(system, w, n);
    double best = -std::numeric_limits<double>::infinity();
    for (int g = 0; g < x_grid; ++g) {
      double x = (x_grid == 1) ? 0.5
                               : static_cast<double>(g) / (x_grid - 1);
      double acc = 0.0;
      for (const IntervalMap* m : maps) {
        acc += std::log(m->deriv1(x));
        x = m->value(x);
      }
      best = std::max(best, acc);
    }
    per_sample.push_back(best / n);
  }
  const auto [mean, se] = mean_and_se(per_sample);
  return {ExponentKind::SupNorm, mean, n, n_samples, se};
}

ExponentEstimate pointwise_exponent(const SkewSystem& system, int n,
                                    int n_samples, std::uint64_t seed) {
  if (n < 1 || n_samples < 1)
    throw std::invalid_argument("pointwise_exponent: bad parameters");
  const int r = system.window_radius();
  std::vector<double> per_sample;
  per_sample.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    Rng rng(sample_seed(seed, i));
    const double x0 = rng.next_double();
    const SymbolWindow w = sample_bernoulli(system.alphabet_size(), r,
                                            n - 1 + r, rng.next_u64());
    per_sample.push_back(log_derivative_sum(system, w, x0, n) / n);
  }
  const auto [mean, se] = mean_and_se(per_sample);
  return {ExponentKind::Pointwise, mean, n, n_samples, se};
}

double stationary_integral_exponent(const DiscreteMeasure& m,
                                    const std::vector<IntervalMap>& maps) {
  m.validate();
  if (maps.empty()) throw std::invalid_argument("no maps");
  const auto pos = m.positions();
  const auto& w = m.weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    double s = 0.0;
    for (const auto& f : maps) s += std::log(f.deriv1(pos[i]));
    acc += w[i] * s / maps.size();
  }
  return acc;
}

StabilityRecord orbit_stability(const SkewSystem& F, const SkewSystem& G,
                                int n_samples, int N, double epsilon,
                                std::uint64_t seed) {
  if (F.alphabet_size() != G.alphabet_size())
    throw std::invalid_argument("alphabet sizes differ");
  if (n_samples < 1 || N < 1)
    throw std::invalid_argument("orbit_stability: bad parameters");
  const int r = std::max(F.window_radius(), G.window_radius());
  StabilityRecord rec;
  rec.epsilon = epsilon;
  rec.horizon = N;
  rec.seed = seed;
  rec.exceedance.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    Rng rng(sample_seed(seed, i));
    const double x0 = rng.next_double();
    const SymbolWindow w = sample_bernoulli(F.alphabet_size(), r, N - 1 + r,
                                            rng.next_u64());
    double xf = x0, xg = x0;
    int count = 0;
    for (int t = 0; t < N; ++t) {
      xf = F.fiber_map_at(w, t).value(xf);
      xg = G.fiber_map_at(w, t).value(xg);
      if (std::fabs(xf - xg) > epsilon) ++count;
    }
    rec.exceedance.push_back(static_cast<double>(count) / N);
  }
  std::vector<double> sorted = rec.exceedance;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t s = sorted.size();
  rec.median = (s % 2 == 1) ? sorted[s / 2]
                            : 0.5 * (sorted[s / 2 - 1] + sorted[s / 2]);
  double mean = 0.0;
  for (double e : sorted) mean += e;
  rec.mean = mean / s;
  return rec;
}

DecayRecord correlation_decay(const SkewSystem& system, int depth,
                              const std::vector<int>& lags, int n_samples,
                              std::uint64_t seed) {
  if (lags.empty() || n_samples < 1)
    throw std::invalid_argument("correlation_decay: bad parameters");
  const int max_lag = *std::max_element(lags.begin(), lags.end());
  if (max_lag < 0) throw std::invalid_argument("negative lag");
  const int r = system.window_radius();
  DecayRecord rec;
  rec.lags = lags;
  std::vector<double> phi;
  std::vector<std::vector<double>> psi(lags.size());
  for (int i = 0; i < n_samples; ++i) {
    const SymbolWindow w = sample_bernoulli(system.alphabet_size(), depth + r,
                                            max_lag + r, sample_seed(seed, i));
    const FiberClass cls = graph_value(system, w, depth, 1e-9);
    if (cls.kind != FiberKind::Point) {
      ++rec.bones_excluded;
      continue;
    }
    const auto orbit = forward_orbit(system, w, cls.value, max_lag);
    phi.push_back(orbit[0]);
    for (std::size_t l = 0; l < lags.size(); ++l)
      psi[l].push_back(orbit[static_cast<std::size_t>(lags[l])]);
  }
  rec.n_samples = static_cast<int>(phi.size());
  rec.c.resize(lags.size(), 0.0);
  rec.std_error.resize(lags.size(), 0.0);
  if (phi.empty()) return rec;
  double phi_mean = 0.0;
  for (double x : phi) phi_mean += x;
  phi_mean /= phi.size();
  const bool phi_const =
      std::all_of(phi.begin(), phi.end(), [&](double x) { return x == phi[0]; });
  for (std::size_t l = 0; l < lags.size(); ++l) {
    const bool psi_const = std::all_of(psi[l].begin(), psi[l].end(),
                                       [&](double x) { return x == psi[l][0]; });
    if (phi_const || psi_const) continue;  // a constant factor: covariance 0
    double psi_mean = 0.0;
    for (double x : psi[l]) psi_mean += x;
    psi_mean /= psi[l].size();
    std::vector<double> products(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i)
      products[i] = (phi[i] - phi_mean) * (psi[l][i] - psi_mean);
    const auto [cov, se] = mean_and_se(products);
    rec.c[l] = std::fabs(cov);
    rec.std_error[l] = se;
  }
  return rec;
}

}  // namespace skewsim
