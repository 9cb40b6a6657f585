#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lofdesign/weight.hpp"

namespace lofd {

/// Point mass of a design: location in [-1, 1] and its (absolute) mass.
struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

/// Probability measure on [-1, 1] made of finitely many atoms plus an
/// absolutely continuous part `ac_scale * v * uniform`. Atom masses are
/// absolute, so they already carry any (1 - r) factor.
///
/// Construction validates: masses positive, locations in [-1, 1] and at
/// least 1e-12 apart, total mass 1 within 1e-12. Atoms are kept sorted.
class DesignMeasure {
 public:
  DesignMeasure(std::vector<Atom> atoms, double ac_scale = 0.0,
                std::optional<WeightFunction> ac_density = std::nullopt);

  static DesignMeasure atomic(std::vector<Atom> atoms);
  static DesignMeasure continuous(WeightFunction density);

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  double ac_scale() const noexcept { return ac_scale_; }
  /// Present iff ac_scale() > 0.
  const std::optional<WeightFunction>& ac_density() const noexcept { return ac_density_; }

  /// Integral of fn against the measure.
  double integrate(const std::function<double(double)>& fn) const;

 private:
  std::vector<Atom> atoms_;
  double ac_scale_ = 0.0;
  std::optional<WeightFunction> ac_density_;
};

/// Polynomial regression with k parameters (degree k - 1): f(x) = (1, x, ..., x^{k-1}).
class PolynomialModel {
 public:
  explicit PolynomialModel(int k);
  int k() const noexcept { return k_; }
  Eigen::VectorXd regressors(double x) const;
  /// e_k = (0, ..., 0, 1).
  Eigen::VectorXd target() const;

 private:
  int k_;
};

/// Candidate true regression function g.
struct RegressionFunction {
  std::function<double(double)> eval;
  std::string description;

  double operator()(double x) const { return eval(x); }
};

/// Reciprocal condition number below which M(xi) counts as singular.
inline constexpr double kSingularRcond = 1e-12;

/// M(xi) = integral of f f^T dxi, assembled from the measure's moments so
/// the result is exactly symmetric and Hankel.
Eigen::MatrixXd moment_matrix(const DesignMeasure& xi, const PolynomialModel& model);

/// Moments mu_0..mu_{count-1} of xi.
std::vector<double> design_moments(const DesignMeasure& xi, int count);

/// lambda_min / lambda_max of a symmetric positive semidefinite matrix.
double reciprocal_condition(const Eigen::MatrixXd& m);

/// Solves M x = rhs for a symmetric information matrix in extended
/// precision. Throws SingularInformationError when rcond(M) < 1e-12.
Eigen::VectorXd solve_information(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs);

/// LOF efficiency: sup{t : t v <= ac_scale * ac_density a.e. on {v > 0}}.
/// Atoms contribute nothing. Evaluated as the infimum of the density ratio on
/// a 4096-point Chebyshev grid refined around jumps of either density.
double lof_efficiency(const DesignMeasure& xi, const WeightFunction& v);

/// B(g, xi) = (1/sigma2) * (integral g^2 dxi - b^T M^{-1} b), b = integral f g dxi.
double b_functional(const RegressionFunction& g, const DesignMeasure& xi, double sigma2,
                    const PolynomialModel& model);

/// F(t) = xi((-inf, t]).
double cdf(const DesignMeasure& xi, double t);

/// Right-continuous inverse inf{t in [-1, 1] : F(t) > u}; Q(1) = 1.
double quantile(const DesignMeasure& xi, double u);

/// Exact design x_{i+1} = Q(i / (n - 1)), i = 0..n-1 (nondecreasing).
std::vector<double> discretize(const DesignMeasure& xi, int n);

/// Empirical measure (1/n) sum delta_{x_i}, merging repeated points.
DesignMeasure empirical_measure(std::span<const double> points);

}  // namespace lofd
