#include "lofdesign/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lofdesign/chebyshev.hpp"
#include "lofdesign/errors.hpp"

namespace lofd {
namespace {

using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

long double horner(const VectorL& coefficients, double y) {
  long double value = 0.0L;
  for (Eigen::Index j = coefficients.size() - 1; j >= 0; --j) value = value * y + coefficients[j];
  return value;
}

// Maximizes s on [a, b] by golden-section search; returns (location, value).
std::pair<double, double> golden_max(const std::function<double(double)>& s, double a, double b) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double sc = s(c);
  double sd = s(d);
  for (int iter = 0; iter < 80 && b - a > 1e-15; ++iter) {
    if (sc > sd) {
      b = d;
      d = c;
      sd = sc;
      c = b - ratio * (b - a);
      sc = s(c);
    } else {
      a = c;
      c = d;
      sc = sd;
      d = a + ratio * (b - a);
      sd = s(d);
    }
  }
  return sc > sd ? std::pair{c, sc} : std::pair{d, sd};
}

OptimalityReport assess(const DesignMeasure& xi, const std::function<double(double)>& sensitivity,
                        int grid_size) {
  if (grid_size < 512) throw std::invalid_argument("optimality check: grid_size must be at least 512");
  std::vector<double> grid = chebyshev_grid(grid_size);
  for (const Atom& atom : xi.atoms()) grid.push_back(atom.location);
  std::sort(grid.begin(), grid.end());

  OptimalityReport report;
  std::size_t best = 0;
  report.grid_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double value = sensitivity(grid[i]);
    if (value > report.grid_max) {
      report.grid_max = value;
      best = i;
    }
  }
  report.argmax_location = grid[best];
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  if (hi > lo) {
    const auto [where, value] = golden_max(sensitivity, lo, hi);
    if (value > report.grid_max) {
      report.grid_max = value;
      report.argmax_location = where;
    }
  }

  if (xi.atoms().empty()) {
    report.optimal = true;
    report.margin = 0.0;
    return report;
  }
  double support_min = std::numeric_limits<double>::infinity();
  for (const Atom& atom : xi.atoms()) {
    const double value = sensitivity(atom.location);
    report.support_values.emplace_back(atom.location, value);
    support_min = std::min(support_min, value);
  }
  if (support_min > 0.0)
    report.margin = (report.grid_max - support_min) / support_min;
  else
    report.margin = report.grid_max > 0.0 ? std::numeric_limits<double>::max() : 0.0;
  report.optimal = report.grid_max <= (1.0 + kOptimalityTolerance) * support_min;
  return report;
}

// Coefficients of c(y) = e_k^T M^{-1} f(y) in the monomial basis.
VectorL sensitivity_coefficients(const DesignMeasure& xi, const PolynomialModel& model) {
  const Eigen::MatrixXd m = moment_matrix(xi, model);
  return solve_information(m, model.target()).cast<long double>();
}

}  // namespace

std::vector<double> chebyshev_grid(int size) {
  if (size < 2) throw std::invalid_argument("chebyshev_grid: size must be at least 2");
  std::vector<double> grid(size);
  for (int i = 0; i < size; ++i) grid[i] = -std::cos(std::numbers::pi * i / (size - 1));
  grid.front() = -1.0;
  grid.back() = 1.0;
  return grid;
}

OptimalityReport check_ek_optimality(const DesignMeasure& xi, const PolynomialModel& model, int grid_size) {
  const VectorL w = sensitivity_coefficients(xi, model);
  auto sensitivity = [&w](double y) {
    const long double c = horner(w, y);
    return static_cast<double>(c * c);
  };
  return assess(xi, sensitivity, grid_size);
}

OptimalityReport check_phi_p_optimality(const DesignMeasure& xi, const Eigen::MatrixXd& K, double p,
                                        const PolynomialModel& model, int grid_size) {
  const int k = model.k();
  if (!(p < 1.0)) throw std::invalid_argument("phi_p check: p must be < 1");
  if (K.rows() != k || K.cols() < 1 || K.cols() > k)
    throw std::invalid_argument("phi_p check: K must be k x s with 1 <= s <= k");
  if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(K).rank() < K.cols())
    throw RankDeficiencyError("phi_p check: K does not have full column rank");

  const Eigen::MatrixXd m = moment_matrix(xi, model);
  Eigen::MatrixXd inverse(k, k);
  for (int c = 0; c < k; ++c) inverse.col(c) = solve_information(m, Eigen::VectorXd::Unit(k, c));
  inverse = 0.5 * (inverse + inverse.transpose());

  const Eigen::MatrixXd reduced = K.transpose() * inverse * K;
  if (reciprocal_condition(reduced) < kSingularRcond)
    throw RankDeficiencyError("phi_p check: K^T M^{-1} K is numerically singular");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reduced);
  const Eigen::VectorXd powered = eig.eigenvalues().array().pow(-p - 1.0);
  const Eigen::MatrixXd middle = eig.eigenvectors() * powered.asDiagonal() * eig.eigenvectors().transpose();
  const Eigen::MatrixXd n = inverse * K * middle * K.transpose() * inverse;

  auto sensitivity = [&n, &model](double y) {
    const Eigen::VectorXd f = model.regressors(y);
    return f.dot(n * f);
  };
  return assess(xi, sensitivity, grid_size);
}

double lemma_a2_residual(int k, std::span<const double> sample_points) {
  if (k < 2 || k > 12) throw std::invalid_argument("lemma_a2_residual: k must lie in [2, 12]");
  const std::vector<double> x = cheb::extrema(k);
  const PolynomialModel model(k);
  Eigen::MatrixXd f_grid(k, k);
  for (int i = 0; i < k; ++i) f_grid.col(i) = model.regressors(x[i]);
  Eigen::VectorXd signs(k);
  for (int i = 0; i < k; ++i) signs[i] = (k - 1 - i) % 2 == 0 ? 1.0 : -1.0;

  // Row vector 1^T S F^{-1}, obtained from F^T w = S 1.
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(f_grid.transpose());
  const Eigen::VectorXd w = lu.solve(signs);
  const double residual = (f_grid.transpose() * w - signs).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-8)) {
    std::ostringstream msg;
    msg << "lemma_a2_residual: Vandermonde solve residual " << residual << " exceeds 1e-8";
    throw ConditioningError(msg.str());
  }

  double worst = 0.0;
  for (double point : sample_points)
    worst = std::max(worst, std::abs(w.dot(model.regressors(point)) - cheb::eval_T(k - 1, point)));
  return worst;
}

double cheb_proportionality(const DesignMeasure& xi, const PolynomialModel& model) {
  const VectorL w = sensitivity_coefficients(xi, model);
  const long double at_one = horner(w, 1.0);
  if (std::abs(static_cast<double>(at_one)) < 1e-12)
    throw DegenerateError("cheb_proportionality: c(1) is numerically zero");
  double worst = 0.0;
  for (double y : chebyshev_grid(2048)) {
    const double ratio = static_cast<double>(horner(w, y) / at_one);
    worst = std::max(worst, std::abs(ratio - cheb::eval_T(model.k() - 1, y)));
  }
  return worst;
}

double check_bayesian_identity(const ConstructionReport& report, const WeightFunction& v) {
  const double r = report.r;
  if (r >= 1.0) return 0.0;
  const PolynomialModel model(report.k);
  const Eigen::MatrixXd full = moment_matrix(report.design, model);
  const Eigen::MatrixXd prior = moment_matrix(DesignMeasure::continuous(v), model);
  Eigen::MatrixXd atomic = Eigen::MatrixXd::Zero(report.k, report.k);
  for (const Atom& atom : report.design.atoms()) {
    const Eigen::VectorXd f = model.regressors(atom.location);
    atomic += (atom.mass / (1.0 - r)) * f * f.transpose();
  }
  return (full - (r * prior + (1.0 - r) * atomic)).cwiseAbs().maxCoeff();
}

}  // namespace lofd
