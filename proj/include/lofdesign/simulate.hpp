#pragma once

#include <cstdint>
#include <optional>

#include "lofdesign/measures.hpp"

namespace lofd {

enum class NoiseKind {
  normal,   ///< Normal(0, sigma^2)
  uniform,  ///< Uniform(-sqrt(3) sigma, sqrt(3) sigma): mean 0, variance sigma^2
};

struct SimConfig {
  DesignMeasure design;
  int k = 2;
  int n = 100;  ///< runs per replicate
  double sigma = 1.0;
  int reps = 1000;
  std::uint64_t seed = 0;
  RegressionFunction truth{[](double) { return 0.0; }, "0"};
  NoiseKind noise = NoiseKind::normal;
  int lanes = 1;  ///< worker threads; results do not depend on it
};

struct SimResult {
  double variance_est = 0.0;     ///< sample variance of the k-th LSE coefficient
  double variance_theory = 0.0;  ///< sigma^2 / n * e_k^T M(xi_n)^{-1} e_k
  std::optional<double> power_est;
  bool undetectable = false;  ///< augmented fit not identifiable on the design
  double critical_value = 0.0;
  int reps_used = 0;
  std::uint64_t seed = 0;
};

/// Deterministic 64-bit seed of the substream used by replicate `index`.
std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t index);

/// Monte Carlo variance of the least-squares estimate of the highest
/// coefficient on the discretized design. Throws RankDeficiencyError if the
/// discretized design matrix has rank < k.
SimResult simulate_lse_variance(const SimConfig& cfg);

/// Power of the nested F test (degree k-1 against degree 2(k-1)) at level
/// `alpha` when data come from `alternative`. Designs whose discretization
/// cannot identify the augmented model come back with undetectable = true
/// and no power estimate.
SimResult lof_detectability(const SimConfig& cfg, const RegressionFunction& alternative, double alpha);

}  // namespace lofd
