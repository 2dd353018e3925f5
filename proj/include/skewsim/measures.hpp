#pragma once

// Probability measures on [0,1]: transfer operator (exact on atoms, Ulam
// matrix on histograms), stationary measure by power iteration, the
// Hutchinson (Wasserstein-1) metric via exact CDF integration, and the
// sampled graph measure with its marginal-distance bracket.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "skewsim/skew_system.hpp"

namespace skewsim {

class DiscreteMeasure {
 public:
  enum class Rep { Atoms, Histogram };

  DiscreteMeasure() : rep_(Rep::Atoms), positions_{0.5}, weights_{1.0} {}

  static DiscreteMeasure atoms(std::vector<double> positions,
                               std::vector<double> weights);
  static DiscreteMeasure point_mass(double x) { return atoms({x}, {1.0}); }
  static DiscreteMeasure histogram(std::vector<double> weights);
  static DiscreteMeasure uniform_histogram(int n_bins);

  Rep rep() const { return rep_; }
  bool is_histogram() const { return rep_ == Rep::Histogram; }
  int n_bins() const { return static_cast<int>(weights_.size()); }
  const std::vector<double>& weights() const { return weights_; }
  // Atom positions; for histograms the bin midpoints.
  std::vector<double> positions() const;
  double bin_midpoint(int i) const {
    return (i + 0.5) / static_cast<double>(weights_.size());
  }

  double total_weight() const;
  // Checks nonnegative weights, positions in [0,1], total weight 1 within
  // 1e-12; throws std::invalid_argument otherwise.
  void validate() const;

  // Canonical atom form (histograms become bin-midpoint atoms).
  DiscreteMeasure to_atoms() const;

 private:
  DiscreteMeasure(Rep rep, std::vector<double> pos, std::vector<double> w)
      : rep_(rep), positions_(std::move(pos)), weights_(std::move(w)) {}

  Rep rep_;
  std::vector<double> positions_;  // empty for histograms
  std::vector<double> weights_;
};

// T(mu) = (1/k) sum_i mu o f_i^{-1}. Atom measures map each atom (x, w) to
// the k atoms (f_i(x), w/k); histograms go through the Ulam matrix with
// overlap-proportional redistribution of each bin image.
DiscreteMeasure transfer_apply(const DiscreteMeasure& mu,
                               const std::vector<IntervalMap>& maps);

struct StationaryResult {
  DiscreteMeasure measure;
  int iterations = 0;
  double final_delta = 0.0;
};

// Power iteration of the Ulam matrix until successive iterates are closer
// than tol in the Hutchinson metric. Starts from the uniform histogram
// unless an initial histogram is supplied. Throws std::runtime_error when
// max_iter is exceeded.
StationaryResult stationary_measure(const std::vector<IntervalMap>& maps,
                                    int n_bins, double tol, int max_iter);
StationaryResult stationary_measure(const std::vector<IntervalMap>& maps,
                                    int n_bins, double tol, int max_iter,
                                    const DiscreteMeasure& initial);

// Wasserstein-1 distance on [0,1], computed exactly as the integral of the
// CDF difference on the canonical atom forms.
double hutchinson_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

struct ProductSampleRow {
  std::uint64_t id = 0;
  std::string digest;
  double gamma = 0.0;
};

struct ProductSample {
  std::vector<ProductSampleRow> rows;
  int bones_excluded = 0;
  int depth = 0;
  std::uint64_t seed = 0;

  DiscreteMeasure fiber_marginal() const;                 // atoms
  DiscreteMeasure fiber_marginal_histogram(int n_bins) const;
};

// Bernoulli sample of (omega, gamma(omega)); bone fibers are excluded and
// counted.
ProductSample graph_measure(const SkewSystem& system, int n_samples, int depth,
                            std::uint64_t seed);

struct GraphDistanceResult {
  double lower = 0.0;  // Hutchinson distance of the fiber marginals
  double upper = 0.0;  // equal-base coupling bound: mean |gamma_F - gamma_G|
  int n_used = 0;
  int bones_excluded = 0;
};

// Brackets the product-space Hutchinson distance between the two graph
// measures; the same base windows drive both systems.
GraphDistanceResult graph_distance(const SkewSystem& F, const SkewSystem& G,
                                   int n_samples, int depth,
                                   std::uint64_t seed);

}  // namespace skewsim
