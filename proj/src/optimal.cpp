#include "lofdesign/optimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lofdesign/chebyshev.hpp"
#include "lofdesign/errors.hpp"

namespace lofd {
namespace {

constexpr double kQZero = 1e-14;
constexpr double kDropMass = 1e-12;
constexpr double kFeasibilitySlack = 1e-12;

void check_k(int k) {
  if (k < 2 || k > cheb::kMaxParameters) {
    std::ostringstream msg;
    msg << "k must lie in [2, " << cheb::kMaxParameters << "], got " << k;
    throw std::invalid_argument(msg.str());
  }
}

double alpha0_from_q(int k, const std::vector<double>& nu, const std::vector<double>& q) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i)
    if (q[i] > kQZero) best = std::min(best, nu[i] / ((k - 1) * q[i]));
  if (!std::isfinite(best)) throw DegenerateError("alpha0: every q_i is numerically zero");
  return std::min(best, 1.0);
}

}  // namespace

std::vector<double> nu_weights(int k) {
  check_k(k);
  std::vector<double> nu(k, 1.0);
  nu.front() = 0.5;
  nu.back() = 0.5;
  return nu;
}

DesignMeasure kw_design(int k) {
  const std::vector<double> nu = nu_weights(k);
  const std::vector<double> x = cheb::extrema(k);
  std::vector<Atom> atoms(k);
  for (int i = 0; i < k; ++i) atoms[i] = {x[i], nu[i] / (k - 1)};
  return DesignMeasure::atomic(std::move(atoms));
}

std::vector<double> q_vector(int k, const WeightFunction& v) {
  const std::vector<double> nu = nu_weights(k);
  const int m = k - 1;
  std::vector<double> integrals(2 * k - 2);
  for (int j = 0; j <= 2 * k - 3; ++j) integrals[j] = cheb::weighted_integral(v, j);

  std::vector<double> q(k, 0.0);
  for (int i = 0; i < k; ++i) {
    double sum = 0.0;
    for (int j = 0; j <= 2 * k - 3; ++j) {
      // cos(j (m - i) pi / m) depends only on j (m - i) mod 2m; reducing the
      // argument first keeps symmetric indices bit-identical.
      const int phase = (j * (m - i)) % (2 * m);
      sum += std::cos(std::numbers::pi * phase / m) * integrals[j];
    }
    q[i] = nu[i] / (2.0 * m) * sum;
  }
  return q;
}

double alpha0(int k, const WeightFunction& v) { return alpha0_from_q(k, nu_weights(k), q_vector(k, v)); }

ConstructionReport construct(int k, double r, const WeightFunction& v) {
  if (!(r >= 0.0)) throw std::invalid_argument("construct: r must be nonnegative");
  const std::vector<double> nu = nu_weights(k);
  const std::vector<double> q = q_vector(k, v);
  const double a0 = alpha0_from_q(k, nu, q);
  if (r > a0 + kFeasibilitySlack) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "construct: r = " << r << " exceeds alpha0 = " << a0 << " for k = " << k;
    throw InfeasibleEfficiencyError(msg.str(), a0);
  }

  const std::vector<double> x = cheb::extrema(k);
  std::vector<double> p(k);
  std::vector<Atom> atoms;
  for (int i = 0; i < k; ++i) {
    p[i] = nu[i] / (k - 1) - r * q[i];
    if (p[i] < -kFeasibilitySlack)
      throw InternalConsistencyError("construct: negative atom mass inside the feasible range");
    p[i] = std::max(p[i], 0.0);
    if (p[i] > kDropMass) atoms.push_back({x[i], p[i]});
  }
  // Quadrature-backed weights give sum(q) = 1 only to ~1e-12, and dropped
  // atoms carry up to 1e-12 each; absorb that into the kept atoms.
  const double scale = std::min(r, 1.0);
  double atom_total = 0.0;
  for (const Atom& atom : atoms) atom_total += atom.mass;
  const double target = 1.0 - scale;
  if (std::abs(atom_total - target) > 1e-9)
    throw InternalConsistencyError("construct: atom masses do not sum to 1 - r");
  if (atom_total > 0.0 && atom_total != target)
    for (Atom& atom : atoms) atom.mass *= target / atom_total;

  std::optional<WeightFunction> density;
  if (scale > 0.0) density = v;
  DesignMeasure design(std::move(atoms), scale, std::move(density));
  return ConstructionReport{k, r, q, p, a0, std::move(design)};
}

}  // namespace lofd
