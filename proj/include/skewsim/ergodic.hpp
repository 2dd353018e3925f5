#pragma once

// Fiber Lyapunov exponent estimators, orbit-stability statistics under
// perturbation, and the correlation-decay mixing proxy.

#include <cstdint>
#include <vector>

#include "skewsim/measures.hpp"
#include "skewsim/skew_system.hpp"

namespace skewsim {

enum class ExponentKind { SupNorm, Pointwise, StationaryIntegral };

struct ExponentEstimate {
  ExponentKind kind = ExponentKind::SupNorm;
  double value = 0.0;  // nats per step
  int n = 0;
  int samples = 0;
  double std_error = 0.0;
};

// sum_{j<n} log Df_{sigma^j omega}(x_j) along the forward orbit from x.
double log_derivative_sum(const SkewSystem& system, const SymbolWindow& w,
                          double x, int n);

// Mean over samples of a_n(omega)/n, where a_n is the log of the maximal
// n-step derivative product over an x-grid of the given size.
ExponentEstimate sup_norm_exponent(const SkewSystem& system, int n, int x_grid,
                                   int n_samples, std::uint64_t seed);

// Birkhoff average of log Df along orbits from uniformly drawn x.
ExponentEstimate pointwise_exponent(const SkewSystem& system, int n,
                                    int n_samples, std::uint64_t seed);

// Space average integral (1/k) sum_i log Df_i dm (quadrature at atom
// positions / bin midpoints).
double stationary_integral_exponent(const DiscreteMeasure& m,
                                    const std::vector<IntervalMap>& maps);

struct StabilityRecord {
  std::vector<double> exceedance;  // per-sample fraction of steps > epsilon
  double median = 0.0;
  double mean = 0.0;
  double epsilon = 0.0;
  int horizon = 0;
  std::uint64_t seed = 0;
};

// Drives F and G with shared (omega, x) samples and reports the fraction of
// the first N steps at which the fiber orbits are farther apart than
// epsilon.
StabilityRecord orbit_stability(const SkewSystem& F, const SkewSystem& G,
                                int n_samples, int N, double epsilon,
                                std::uint64_t seed);

struct DecayRecord {
  std::vector<int> lags;
  std::vector<double> c;          // |cov| estimates per lag
  std::vector<double> std_error;
  int n_samples = 0;
  int bones_excluded = 0;
};

// Autocovariance of the fiber coordinate along the invariant graph,
// C_n = E[x_0 x_n] - E[x_0] E[x_n], sampled at (omega, gamma(omega)).
DecayRecord correlation_decay(const SkewSystem& system, int depth,
                              const std::vector<int>& lags, int n_samples,
                              std::uint64_t seed);

}  // namespace skewsim
