#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "lofdesign/measures.hpp"
#include "lofdesign/optimal.hpp"

namespace lofd {

/// Outcome of an equivalence-theorem check.
///
/// `margin` is relative: (max over [-1, 1] of the sensitivity - min over the
/// support) / min over the support. The design passes when margin <= 1e-8.
/// A design with no atoms (the excess over r v.uniform is zero) passes
/// vacuously with margin 0 and an empty support list.
struct OptimalityReport {
  bool optimal = false;
  double margin = 0.0;
  double argmax_location = 0.0;
  double grid_max = 0.0;
  std::vector<std::pair<double, double>> support_values;  // (location, sensitivity)
};

inline constexpr double kOptimalityTolerance = 1e-8;
inline constexpr int kDefaultGridSize = 4096;

/// Sensitivity c(y)^2 with c(y) = e_k^T M(xi)^{-1} f(y), checked against the
/// atoms of xi. grid_size must be at least 512.
OptimalityReport check_ek_optimality(const DesignMeasure& xi, const PolynomialModel& model,
                                     int grid_size = kDefaultGridSize);

/// General phi_p check with sensitivity f(y)^T N f(y),
/// N = M^{-1} K (K^T M^{-1} K)^{-p-1} K^T M^{-1}. K is k x s with rank s and
/// p < 1. The support set is the atom list of xi.
OptimalityReport check_phi_p_optimality(const DesignMeasure& xi, const Eigen::MatrixXd& K, double p,
                                        const PolynomialModel& model, int grid_size = kDefaultGridSize);

/// Max over `sample_points` of |1^T S F^{-1} f(x) - T_{k-1}(x)| where F holds
/// f at the extremal grid column-wise and S = diag((-1)^{k-1-i}).
double lemma_a2_residual(int k, std::span<const double> sample_points);

/// Max over a 2048-point grid of |c(y)/c(1) - T_{k-1}(y)|.
double cheb_proportionality(const DesignMeasure& xi, const PolynomialModel& model);

/// Max entrywise |M(xi) - (r M(v.uniform) + (1-r) M(zeta))| with zeta the
/// normalized atomic part. Returns 0 when r = 1.
double check_bayesian_identity(const ConstructionReport& report, const WeightFunction& v);

/// Chebyshev-spaced grid on [-1, 1] including both endpoints, increasing.
std::vector<double> chebyshev_grid(int size);

}  // namespace lofd
