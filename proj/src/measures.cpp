#include "skewsim/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "skewsim/attractor.hpp"
#include "skewsim/rng.hpp"

namespace skewsim {

DiscreteMeasure DiscreteMeasure::atoms(std::vector<double> positions,
                                       std::vector<double> weights) {
  if (positions.size() != weights.size() || positions.empty())
    throw std::invalid_argument("atoms: need matching nonempty vectors");
  DiscreteMeasure m(Rep::Atoms, std::move(positions), std::move(weights));
  m.validate();
  return m;
}

DiscreteMeasure DiscreteMeasure::histogram(std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("histogram: no bins");
  DiscreteMeasure m(Rep::Histogram, {}, std::move(weights));
  m.validate();
  return m;
}

DiscreteMeasure DiscreteMeasure::uniform_histogram(int n_bins) {
  if (n_bins < 1) throw std::invalid_argument("need n_bins >= 1");
  return histogram(std::vector<double>(static_cast<std::size_t>(n_bins),
                                       1.0 / n_bins));
}

std::vector<double> DiscreteMeasure::positions() const {
  if (rep_ == Rep::Atoms) return positions_;
  std::vector<double> pos(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i)
    pos[i] = bin_midpoint(static_cast<int>(i));
  return pos;
}

double DiscreteMeasure::total_weight() const {
  // Neumaier summation; naive accumulation of 10^5 equal weights can drift
  // past the 1e-12 normalization check.
  double sum = 0.0, comp = 0.0;
  for (double w : weights_) {
    const double t = sum + w;
    comp += (std::fabs(sum) >= std::fabs(w)) ? (sum - t) + w : (w - t) + sum;
    sum = t;
  }
  return sum + comp;
}

void DiscreteMeasure::validate() const {
  for (double w : weights_)
    if (!(w >= 0.0)) throw std::invalid_argument("negative weight");
  if (rep_ == Rep::Atoms)
    for (double p : positions_)
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("atom position outside [0,1]");
  if (std::fabs(total_weight() - 1.0) > 1e-12)
    throw std::invalid_argument("measure is not normalized");
}

DiscreteMeasure DiscreteMeasure::to_atoms() const {
  if (rep_ == Rep::Atoms) return *this;
  return DiscreteMeasure(Rep::Atoms, positions(), weights_);
}

namespace {

// Sparse row-stochastic Ulam matrix: row j lists (bin, share) pairs for the
// image of bin j under (1/k) sum_i f_i.
std::vector<std::vector<std::pair<int, double>>> ulam_matrix(
    const std::vector<IntervalMap>& maps, int n) {
  std::vector<std::vector<std::pair<int, double>>> rows(
      static_cast<std::size_t>(n));
  const double share = 1.0 / maps.size();
  for (int j = 0; j < n; ++j) {
    const double a = static_cast<double>(j) / n;
    const double b = static_cast<double>(j + 1) / n;
    for (const auto& f : maps) {
      const double ia = f.value(a);
      const double ib = f.value(b);
      const double len = ib - ia;
      const int first = std::clamp(static_cast<int>(std::floor(ia * n)), 0, n - 1);
      const int last = std::clamp(static_cast<int>(std::floor(ib * n)), 0, n - 1);
      for (int t = first; t <= last; ++t) {
        const double lo = std::max(ia, static_cast<double>(t) / n);
        const double hi = std::min(ib, static_cast<double>(t + 1) / n);
        if (hi <= lo) continue;
        rows[static_cast<std::size_t>(j)].push_back(
            {t, share * (hi - lo) / len});
      }
    }
  }
  return rows;
}

std::vector<double> ulam_step(
    const std::vector<std::vector<std::pair<int, double>>>& rows,
    const std::vector<double>& w) {
  std::vector<double> out(w.size(), 0.0);
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] == 0.0) continue;
    for (const auto& [t, share] : rows[j]) out[static_cast<std::size_t>(t)] += w[j] * share;
  }
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& x : out) x /= total;
  return out;
}

}  // namespace

DiscreteMeasure transfer_apply(const DiscreteMeasure& mu,
                               const std::vector<IntervalMap>& maps) {
  mu.validate();
  if (maps.empty()) throw std::invalid_argument("transfer_apply: no maps");
  if (mu.rep() == DiscreteMeasure::Rep::Atoms) {
    const auto pos = mu.positions();
    const auto& w = mu.weights();
    std::vector<double> out_pos, out_w;
    out_pos.reserve(pos.size() * maps.size());
    out_w.reserve(pos.size() * maps.size());
    const double share = 1.0 / maps.size();
    for (std::size_t i = 0; i < pos.size(); ++i)
      for (const auto& f : maps) {
        out_pos.push_back(f.value(pos[i]));
        out_w.push_back(w[i] * share);
      }
    return DiscreteMeasure::atoms(std::move(out_pos), std::move(out_w));
  }
  const auto rows = ulam_matrix(maps, mu.n_bins());
  return DiscreteMeasure::histogram(ulam_step(rows, mu.weights()));
}

StationaryResult stationary_measure(const std::vector<IntervalMap>& maps,
                                    int n_bins, double tol, int max_iter) {
  return stationary_measure(maps, n_bins, tol, max_iter,
                            DiscreteMeasure::uniform_histogram(n_bins));
}

StationaryResult stationary_measure(const std::vector<IntervalMap>& maps,
                                    int n_bins, double tol, int max_iter,
                                    const DiscreteMeasure& initial) {
  if (!initial.is_histogram() || initial.n_bins() != n_bins)
    throw std::invalid_argument("initial measure must be a histogram on n_bins");
  initial.validate();
  const auto rows = ulam_matrix(maps, n_bins);
  DiscreteMeasure cur = initial;
  for (int it = 1; it <= max_iter; ++it) {
    DiscreteMeasure next = DiscreteMeasure::histogram(ulam_step(rows, cur.weights()));
    const double delta = hutchinson_distance(cur, next);
    cur = std::move(next);
    if (delta < tol) return {std::move(cur), it, delta};
  }
  throw std::runtime_error("stationary_measure: max_iter exceeded");
}

double hutchinson_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  mu.validate();
  nu.validate();
  const DiscreteMeasure a = mu.to_atoms();
  const DiscreteMeasure b = nu.to_atoms();
  // Signed atom list; the CDF difference is piecewise constant between
  // positions and its absolute integral is the W1 distance.
  std::vector<std::pair<double, double>> events;
  events.reserve(a.weights().size() + b.weights().size());
  {
    const auto pa = a.positions();
    for (std::size_t i = 0; i < pa.size(); ++i)
      events.push_back({pa[i], a.weights()[i]});
    const auto pb = b.positions();
    for (std::size_t i = 0; i < pb.size(); ++i)
      events.push_back({pb[i], -b.weights()[i]});
  }
  std::sort(events.begin(), events.end());
  double dist = 0.0, cdf_diff = 0.0, prev = 0.0;
  for (const auto& [x, w] : events) {
    dist += std::fabs(cdf_diff) * (x - prev);
    cdf_diff += w;
    prev = x;
  }
  dist += std::fabs(cdf_diff) * (1.0 - prev);
  return dist;
}

DiscreteMeasure ProductSample::fiber_marginal() const {
  if (rows.empty()) throw std::runtime_error("empty sample");
  std::vector<double> pos, w;
  pos.reserve(rows.size());
  const double share = 1.0 / rows.size();
  for (const auto& r : rows) pos.push_back(r.gamma);
  w.assign(rows.size(), share);
  return DiscreteMeasure::atoms(std::move(pos), std::move(w));
}

DiscreteMeasure ProductSample::fiber_marginal_histogram(int n_bins) const {
  if (rows.empty()) throw std::runtime_error("empty sample");
  std::vector<double> w(static_cast<std::size_t>(n_bins), 0.0);
  const double share = 1.0 / rows.size();
  for (const auto& r : rows) {
    int b = std::clamp(static_cast<int>(std::floor(r.gamma * n_bins)), 0,
                       n_bins - 1);
    w[static_cast<std::size_t>(b)] += share;
  }
  return DiscreteMeasure::histogram(std::move(w));
}

ProductSample graph_measure(const SkewSystem& system, int n_samples, int depth,
                            std::uint64_t seed) {
  ProductSample out;
  out.depth = depth;
  out.seed = seed;
  out.rows.reserve(static_cast<std::size_t>(n_samples));
  const int r = system.window_radius();
  for (int i = 0; i < n_samples; ++i) {
    const SymbolWindow w = sample_bernoulli(system.alphabet_size(), depth + r,
                                            r, sample_seed(seed, i));
    const FiberClass cls = graph_value(system, w, depth, 1e-9);
    if (cls.kind == FiberKind::Point)
      out.rows.push_back({static_cast<std::uint64_t>(i), w.digest(), cls.value});
    else
      ++out.bones_excluded;
  }
  return out;
}

GraphDistanceResult graph_distance(const SkewSystem& F, const SkewSystem& G,
                                   int n_samples, int depth,
                                   std::uint64_t seed) {
  if (F.alphabet_size() != G.alphabet_size())
    throw std::invalid_argument("alphabet sizes differ");
  GraphDistanceResult res;
  const int r = std::max(F.window_radius(), G.window_radius());
  std::vector<double> gf, gg;
  gf.reserve(static_cast<std::size_t>(n_samples));
  gg.reserve(static_cast<std::size_t>(n_samples));
  double upper_sum = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const SymbolWindow w = sample_bernoulli(F.alphabet_size(), depth + r, r,
                                            sample_seed(seed, i));
    const FiberClass a = graph_value(F, w, depth, 1e-9);
    const FiberClass b = graph_value(G, w, depth, 1e-9);
    if (a.kind != FiberKind::Point || b.kind != FiberKind::Point) {
      ++res.bones_excluded;
      continue;
    }
    gf.push_back(a.value);
    gg.push_back(b.value);
    upper_sum += std::fabs(a.value - b.value);
  }
  res.n_used = static_cast<int>(gf.size());
  if (res.n_used == 0) return res;
  res.upper = upper_sum / res.n_used;
  const double share = 1.0 / res.n_used;
  res.lower = hutchinson_distance(
      DiscreteMeasure::atoms(gf, std::vector<double>(gf.size(), share)),
      DiscreteMeasure::atoms(gg, std::vector<double>(gg.size(), share)));
  if (res.lower > res.upper + 1e-12)
    throw std::runtime_error("marginal distance exceeded the coupling bound");
  return res;
}

}  // namespace skewsim
