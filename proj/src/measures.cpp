#include "lofdesign/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lofdesign/errors.hpp"

namespace lofd {

DesignMeasure::DesignMeasure(std::vector<Atom> atoms, double ac_scale,
                             std::optional<WeightFunction> ac_density)
    : atoms_(std::move(atoms)), ac_scale_(ac_scale) {
  if (!(ac_scale >= 0.0 && ac_scale <= 1.0))
    throw std::invalid_argument("design: ac_scale must lie in [0, 1]");
  if (ac_scale > 0.0) {
    if (!ac_density) throw std::invalid_argument("design: ac_scale > 0 requires a density");
    ac_density_ = std::move(ac_density);
  }
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  double total = ac_scale_;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& atom = atoms_[i];
    if (!(atom.location >= -1.0 && atom.location <= 1.0)) {
      std::ostringstream msg;
      msg << "design: atom location " << atom.location << " outside [-1, 1]";
      throw std::invalid_argument(msg.str());
    }
    if (!(atom.mass > 0.0 && atom.mass <= 1.0)) {
      std::ostringstream msg;
      msg << "design: atom mass " << atom.mass << " at " << atom.location << " not in (0, 1]";
      throw std::invalid_argument(msg.str());
    }
    if (i > 0 && atom.location - atoms_[i - 1].location < 1e-12)
      throw std::invalid_argument("design: atom locations must be pairwise distinct");
    total += atom.mass;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "design: total mass " << total << " differs from 1";
    throw std::invalid_argument(msg.str());
  }
}

DesignMeasure DesignMeasure::atomic(std::vector<Atom> atoms) { return DesignMeasure(std::move(atoms)); }

DesignMeasure DesignMeasure::continuous(WeightFunction density) {
  return DesignMeasure({}, 1.0, std::move(density));
}

double DesignMeasure::integrate(const std::function<double(double)>& fn) const {
  double sum = 0.0;
  for (const Atom& atom : atoms_) sum += atom.mass * fn(atom.location);
  if (ac_scale_ > 0.0) sum += ac_scale_ * 0.5 * ac_density_->integrate(fn, 1e-12);
  return sum;
}

PolynomialModel::PolynomialModel(int k) : k_(k) {
  if (k < 2) throw std::invalid_argument("polynomial model needs k >= 2");
}

Eigen::VectorXd PolynomialModel::regressors(double x) const {
  Eigen::VectorXd f(k_);
  double power = 1.0;
  for (int i = 0; i < k_; ++i) {
    f[i] = power;
    power *= x;
  }
  return f;
}

Eigen::VectorXd PolynomialModel::target() const {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(k_);
  e[k_ - 1] = 1.0;
  return e;
}

std::vector<double> design_moments(const DesignMeasure& xi, int count) {
  std::vector<double> mu(count, 0.0);
  for (const Atom& atom : xi.atoms()) {
    double power = 1.0;
    for (int n = 0; n < count; ++n) {
      mu[n] += atom.mass * power;
      power *= atom.location;
    }
  }
  if (xi.ac_scale() > 0.0) {
    const WeightFunction& v = *xi.ac_density();
    for (int n = 0; n < count; ++n) mu[n] += xi.ac_scale() * v.moment(n);
  }
  return mu;
}

Eigen::MatrixXd moment_matrix(const DesignMeasure& xi, const PolynomialModel& model) {
  const int k = model.k();
  const std::vector<double> mu = design_moments(xi, 2 * k - 1);
  Eigen::MatrixXd m(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) m(a, b) = mu[a + b];
  return m;
}

double reciprocal_condition(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  const auto& values = eig.eigenvalues();
  const double largest = values.cwiseAbs().maxCoeff();
  if (!(largest > 0.0)) return 0.0;
  return std::max(values.minCoeff(), 0.0) / largest;
}

Eigen::VectorXd solve_information(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs) {
  const double rcond = reciprocal_condition(m);
  if (rcond < kSingularRcond) {
    std::ostringstream msg;
    msg << "information matrix is numerically singular (rcond " << rcond << " < " << kSingularRcond << ")";
    throw SingularInformationError(msg.str(), rcond);
  }
  using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const MatrixL ml = m.cast<long double>();
  const VectorL bl = rhs.cast<long double>();
  Eigen::LDLT<MatrixL> ldlt(ml);
  VectorL x = ldlt.solve(bl);
  x += ldlt.solve(VectorL(bl - ml * x));
  return x.cast<double>();
}

namespace {

void add_jump_refinement(std::vector<double>& grid, std::span<const double> jumps) {
  for (double jump : jumps) {
    for (int m = 2; m <= 9; ++m) {
      const double offset = std::pow(10.0, -m);
      for (double x : {jump - offset, jump + offset})
        if (x > -1.0 && x < 1.0) grid.push_back(x);
    }
  }
}

}  // namespace

double lof_efficiency(const DesignMeasure& xi, const WeightFunction& v) {
  if (xi.ac_scale() <= 0.0) return 0.0;
  const WeightFunction& h = *xi.ac_density();

  constexpr int kGrid = 4096;
  std::vector<double> grid;
  grid.reserve(kGrid + 64);
  for (int i = 0; i < kGrid; ++i) grid.push_back(std::cos(std::numbers::pi * (i + 0.5) / kGrid));
  add_jump_refinement(grid, v.jump_points());
  add_jump_refinement(grid, h.jump_points());

  double ratio = std::numeric_limits<double>::infinity();
  for (double x : grid) {
    const double vx = v(x);
    if (std::isnan(vx)) throw std::invalid_argument("lof_efficiency: weight undefined on [-1, 1]");
    if (vx <= 1e-14) continue;
    const double hx = h(x);
    if (std::isnan(hx)) throw std::invalid_argument("lof_efficiency: design density undefined on [-1, 1]");
    const double candidate = xi.ac_scale() * hx / vx;
    if (std::isnan(candidate)) continue;  // inf / inf: no constraint at this point
    ratio = std::min(ratio, candidate);
  }
  if (!std::isfinite(ratio)) return std::isinf(ratio) && ratio > 0 ? 1.0 : 0.0;
  return std::clamp(ratio, 0.0, 1.0);
}

double b_functional(const RegressionFunction& g, const DesignMeasure& xi, double sigma2,
                    const PolynomialModel& model) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("b_functional: sigma2 must be positive");
  const int k = model.k();
  const Eigen::MatrixXd m = moment_matrix(xi, model);
  Eigen::VectorXd b(k);
  for (int a = 0; a < k; ++a)
    b[a] = xi.integrate([&g, a](double x) { return std::pow(x, a) * g(x); });
  const double g2 = xi.integrate([&g](double x) {
    const double value = g(x);
    return value * value;
  });
  const Eigen::VectorXd w = solve_information(m, b);
  const double value = (g2 - b.dot(w)) / sigma2;
  if (value >= 0.0) return value;
  const double slack = 1e-10 * std::max(1.0, g2 / sigma2);
  if (value >= -slack) return 0.0;
  std::ostringstream msg;
  msg << "b_functional: projection residual " << value << " is negative beyond round-off";
  throw InternalConsistencyError(msg.str());
}

double cdf(const DesignMeasure& xi, double t) {
  if (t < -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double value = 0.0;
  for (const Atom& atom : xi.atoms()) {
    if (atom.location > t) break;
    value += atom.mass;
  }
  if (xi.ac_scale() > 0.0) value += xi.ac_scale() * xi.ac_density()->cumulative(t);
  return std::min(value, 1.0);
}

double quantile(const DesignMeasure& xi, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("quantile: u must lie in [0, 1]");
  if (u >= 1.0) return 1.0;
  if (cdf(xi, -1.0) > u) return -1.0;

  // Q lies in (lo, hi]; F(lo) <= u and F(hi-) > u.
  auto bisect = [&xi, u](double lo, double hi) {
    const double segment_start = lo;
    for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (cdf(xi, mid) > u)
        hi = mid;
      else
        lo = mid;
    }
    if (hi - segment_start <= 2e-12 && cdf(xi, segment_start) >= u) return segment_start;
    return hi;
  };

  double segment_start = -1.0;
  for (const Atom& atom : xi.atoms()) {
    if (atom.location <= -1.0) continue;
    const double at = cdf(xi, atom.location);
    if (at > u) {
      if (at - atom.mass > u) return bisect(segment_start, atom.location);
      return atom.location;
    }
    segment_start = atom.location;
  }
  return bisect(segment_start, 1.0);
}

std::vector<double> discretize(const DesignMeasure& xi, int n) {
  if (n < 2) throw std::invalid_argument("discretize: n must be at least 2");
  std::vector<double> points(n);
  for (int i = 0; i < n; ++i) points[i] = quantile(xi, static_cast<double>(i) / (n - 1));
  return points;
}

DesignMeasure empirical_measure(std::span<const double> points) {
  if (points.empty()) throw std::invalid_argument("empirical_measure: no points");
  std::vector<double> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  const double unit = 1.0 / static_cast<double>(sorted.size());
  std::vector<Atom> atoms;
  std::size_t count = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    ++count;
    const bool last = i + 1 == sorted.size() || sorted[i + 1] - sorted[i + 1 - count] >= 1e-12;
    if (last) {
      atoms.push_back({sorted[i + 1 - count], static_cast<double>(count) * unit});
      count = 0;
    }
  }
  return DesignMeasure::atomic(std::move(atoms));
}

}  // namespace lofd
