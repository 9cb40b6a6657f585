#include "lofdesign/simulate.hpp"

#include <algorithm>
#include <boost/math/distributions/fisher_f.hpp>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "lofdesign/chebyshev.hpp"
#include "lofdesign/errors.hpp"

namespace lofd {
namespace {

using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

void validate(const SimConfig& cfg) {
  if (cfg.k < 2) throw std::invalid_argument("simulate: k must be at least 2");
  if (cfg.n < cfg.k) throw std::invalid_argument("simulate: n must be at least k");
  if (cfg.reps < 1) throw std::invalid_argument("simulate: reps must be at least 1");
  if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma))
    throw std::invalid_argument("simulate: sigma must be finite and nonnegative");
  if (cfg.lanes < 1) throw std::invalid_argument("simulate: lanes must be at least 1");
  if (!cfg.truth.eval) throw std::invalid_argument("simulate: truth function is empty");
}

std::size_t distinct_count(const std::vector<double>& sorted_points) {
  std::size_t count = sorted_points.empty() ? 0 : 1;
  double anchor = sorted_points.empty() ? 0.0 : sorted_points.front();
  for (double x : sorted_points) {
    if (x - anchor >= 1e-12) {
      ++count;
      anchor = x;
    }
  }
  return count;
}

// Orthonormal basis of the polynomials of degree < columns on the points,
// built from a Chebyshev basis for conditioning.
Eigen::MatrixXd polynomial_basis(const std::vector<double>& points, int columns) {
  Eigen::MatrixXd c(static_cast<Eigen::Index>(points.size()), columns);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (int j = 0; j < columns; ++j) c(static_cast<Eigen::Index>(i), j) = cheb::eval_T(j, points[i]);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(c);
  return qr.householderQ() * Eigen::MatrixXd::Identity(c.rows(), columns);
}

int numeric_rank(const std::vector<double>& points, int columns) {
  Eigen::MatrixXd c(static_cast<Eigen::Index>(points.size()), columns);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (int j = 0; j < columns; ++j) c(static_cast<Eigen::Index>(i), j) = cheb::eval_T(j, points[i]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(c);
  qr.setThreshold(1e-10);
  return static_cast<int>(qr.rank());
}

double residual_sum_of_squares(const Eigen::MatrixXd& basis, const Eigen::VectorXd& y) {
  const Eigen::VectorXd residual = y - basis * (basis.transpose() * y);
  return residual.squaredNorm();
}

struct FTest {
  Eigen::MatrixXd null_basis;
  Eigen::MatrixXd full_basis;
  double df_num = 0.0;
  double df_den = 0.0;
  double critical = 0.0;
};

struct Replicates {
  std::vector<double> coefficient;
  std::vector<unsigned char> rejected;
};

Replicates run_replicates(const SimConfig& cfg, const std::vector<double>& points,
                          const Eigen::VectorXd& estimator, const std::function<double(double)>& mean,
                          const FTest* test) {
  const int n = cfg.n;
  Eigen::VectorXd mu(n);
  for (int i = 0; i < n; ++i) mu[i] = mean(points[i]);

  Replicates out;
  out.coefficient.assign(cfg.reps, 0.0);
  out.rejected.assign(cfg.reps, 0);

  auto work = [&](int begin, int end) {
    Eigen::VectorXd y(n);
    const double half_width = std::sqrt(3.0) * cfg.sigma;
    for (int rep = begin; rep < end; ++rep) {
      std::mt19937_64 engine(replicate_seed(cfg.seed, static_cast<std::uint64_t>(rep)));
      if (cfg.noise == NoiseKind::normal) {
        std::normal_distribution<double> noise(0.0, 1.0);
        for (int i = 0; i < n; ++i) y[i] = mu[i] + cfg.sigma * noise(engine);
      } else {
        std::uniform_real_distribution<double> noise(-1.0, 1.0);
        for (int i = 0; i < n; ++i) y[i] = mu[i] + half_width * noise(engine);
      }
      out.coefficient[rep] = estimator.dot(y);
      if (test) {
        const double rss0 = residual_sum_of_squares(test->null_basis, y);
        const double rss1 = residual_sum_of_squares(test->full_basis, y);
        bool reject;
        if (rss1 <= 0.0) {
          reject = rss0 > 0.0;
        } else {
          const double f = ((rss0 - rss1) / test->df_num) / (rss1 / test->df_den);
          reject = f > test->critical;
        }
        out.rejected[rep] = reject ? 1 : 0;
      }
    }
  };

  const int lanes = std::min(cfg.lanes, cfg.reps);
  if (lanes <= 1) {
    work(0, cfg.reps);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(lanes);
    for (int lane = 0; lane < lanes; ++lane) {
      const int begin = static_cast<int>(static_cast<long long>(cfg.reps) * lane / lanes);
      const int end = static_cast<int>(static_cast<long long>(cfg.reps) * (lane + 1) / lanes);
      threads.emplace_back(work, begin, end);
    }
    for (auto& thread : threads) thread.join();
  }
  return out;
}

double sample_variance(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  // shifted by the first value so identical replicates give exactly 0
  const double shift = values.front();
  double mean = 0.0;
  for (double v : values) mean += v - shift;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - shift - mean) * (v - shift - mean);
  return ss / static_cast<double>(values.size() - 1);
}

// Row of (X^T X)^{-1} X^T picking the k-th monomial coefficient, and
// e_k^T (X^T X)^{-1} e_k.
std::pair<Eigen::VectorXd, double> highest_coefficient_estimator(const std::vector<double>& points, int k) {
  const PolynomialModel model(k);
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd x(n, k);
  for (Eigen::Index i = 0; i < n; ++i) x.row(i) = model.regressors(points[i]).transpose();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < k) {
    std::ostringstream msg;
    msg << "simulate: discretized design matrix has rank " << qr.rank() << " < k = " << k;
    throw RankDeficiencyError(msg.str());
  }
  const MatrixL gram = (x.transpose() * x).cast<long double>();
  const VectorL e = model.target().cast<long double>();
  Eigen::LDLT<MatrixL> ldlt(gram);
  VectorL z = ldlt.solve(e);
  z += ldlt.solve(VectorL(e - gram * z));
  const Eigen::VectorXd zd = z.cast<double>();
  return {x * zd, static_cast<double>(z[k - 1])};
}

}  // namespace

std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over a Weyl-sequence offset
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SimResult simulate_lse_variance(const SimConfig& cfg) {
  validate(cfg);
  const std::vector<double> points = discretize(cfg.design, cfg.n);
  const auto [estimator, gram_inverse_kk] = highest_coefficient_estimator(points, cfg.k);

  const Replicates reps = run_replicates(cfg, points, estimator, cfg.truth.eval, nullptr);
  SimResult result;
  result.variance_est = sample_variance(reps.coefficient);
  result.variance_theory = cfg.sigma * cfg.sigma * gram_inverse_kk;
  result.reps_used = cfg.reps;
  result.seed = cfg.seed;
  return result;
}

SimResult lof_detectability(const SimConfig& cfg, const RegressionFunction& alternative, double alpha) {
  validate(cfg);
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("lof_detectability: alpha must lie in (0, 1)");
  if (!alternative.eval) throw std::invalid_argument("lof_detectability: alternative is empty");

  const std::vector<double> points = discretize(cfg.design, cfg.n);
  const auto [estimator, gram_inverse_kk] = highest_coefficient_estimator(points, cfg.k);

  SimResult result;
  result.variance_theory = cfg.sigma * cfg.sigma * gram_inverse_kk;
  result.reps_used = cfg.reps;
  result.seed = cfg.seed;

  const int full = 2 * cfg.k - 1;
  const bool identifiable = static_cast<int>(distinct_count(points)) >= full && cfg.n > full &&
                            numeric_rank(points, full) == full;
  if (!identifiable) {
    result.undetectable = true;
    const Replicates reps = run_replicates(cfg, points, estimator, alternative.eval, nullptr);
    result.variance_est = sample_variance(reps.coefficient);
    return result;
  }

  FTest test;
  test.null_basis = polynomial_basis(points, cfg.k);
  test.full_basis = polynomial_basis(points, full);
  test.df_num = static_cast<double>(cfg.k - 1);
  test.df_den = static_cast<double>(cfg.n - full);
  const boost::math::fisher_f_distribution<double> f_dist(test.df_num, test.df_den);
  test.critical = boost::math::quantile(boost::math::complement(f_dist, alpha));
  result.critical_value = test.critical;

  const Replicates reps = run_replicates(cfg, points, estimator, alternative.eval, &test);
  result.variance_est = sample_variance(reps.coefficient);
  std::size_t rejections = 0;
  for (unsigned char r : reps.rejected) rejections += r;
  result.power_est = static_cast<double>(rejections) / static_cast<double>(cfg.reps);
  return result;
}

}  // namespace lofd
