#include "lofdesign/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "lofdesign/errors.hpp"

namespace lofd::quad {
namespace {

constexpr int kOrder = 16;
constexpr int kMaxDepth = 48;
constexpr int kMaxPanels = 200000;

struct RuleStorage {
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};

  RuleStorage() {
    // Newton iteration on P_n starting from the Chebyshev guess.
    const int n = kOrder;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      nodes[i] = -z;
      nodes[n - 1 - i] = z;
      const double w = 2.0 / ((1.0 - z * z) * dp * dp);
      weights[i] = w;
      weights[n - 1 - i] = w;
    }
  }
};

double panel(const std::function<double(double)>& fn, double a, double b) {
  const auto& rule = gauss_legendre_rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < kOrder; ++i) sum += rule.weights[i] * fn(mid + half * rule.nodes[i]);
  return sum * half;
}

struct Adaptive {
  const std::function<double(double)>& fn;
  double tol_density;  // tolerance per unit length
  int panels = 0;
  double worst_error = 0.0;
  bool converged = true;

  double run(double a, double b, double whole, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = panel(fn, a, mid);
    const double right = panel(fn, mid, b);
    const double refined = left + right;
    const double err = std::abs(refined - whole);
    panels += 2;
    if (err <= tol_density * (b - a) || depth >= kMaxDepth || panels >= kMaxPanels) {
      if (err > tol_density * (b - a)) {
        converged = false;
        worst_error += err;
      }
      return refined;
    }
    return run(a, mid, left, depth + 1) + run(mid, b, right, depth + 1);
  }
};

}  // namespace

const GaussLegendreRule& gauss_legendre_rule() {
  static const RuleStorage storage;
  static const GaussLegendreRule rule{storage.nodes, storage.weights};
  return rule;
}

double integrate(const std::function<double(double)>& fn, double a, double b, double abs_tol,
                 std::span<const double> breakpoints) {
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a};
  for (double bp : breakpoints)
    if (bp > a && bp < b) cuts.push_back(bp);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Leave headroom so the sum over panels stays inside the requested bound.
  Adaptive adaptive{fn, 0.1 * abs_tol / (b - a)};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    total += adaptive.run(lo, hi, panel(fn, lo, hi), 0);
  }
  if (!adaptive.converged || !std::isfinite(total)) {
    std::ostringstream msg;
    msg << "adaptive Gauss-Legendre did not reach tolerance " << abs_tol
        << " on [" << a << ", " << b << "]; achieved error estimate " << adaptive.worst_error;
    throw QuadratureError(msg.str(), adaptive.worst_error);
  }
  return total;
}

}  // namespace lofd::quad
