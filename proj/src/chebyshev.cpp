#include "lofdesign/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lofd::cheb {
namespace {

void check_degree(int j) {
  if (j < 0) throw std::invalid_argument("Chebyshev degree must be nonnegative");
  if (j > 2 * kMaxParameters - 3) {
    std::ostringstream msg;
    msg << "Chebyshev degree " << j << " exceeds supported maximum " << 2 * kMaxParameters - 3;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

double eval_T(int j, double x) {
  check_degree(j);
  if (!(std::abs(x) <= 1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "eval_T: argument " << x << " outside [-1, 1]";
    throw std::domain_error(msg.str());
  }
  x = std::clamp(x, -1.0, 1.0);
  if (j == 0) return 1.0;
  return std::cos(j * std::acos(x));
}

double eval_T_recurrence(int j, double x) {
  check_degree(j);
  if (j == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int n = 1; n < j; ++n) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> extrema(int k) {
  if (k < 2 || k > kMaxParameters) {
    std::ostringstream msg;
    msg << "extrema: k must lie in [2, " << kMaxParameters << "], got " << k;
    throw std::invalid_argument(msg.str());
  }
  std::vector<double> points(k);
  const int m = k - 1;
  for (int i = 0; i < k; ++i) {
    // cos(pi (m - i) / m), written as sin of a symmetric angle so the
    // mirror points come out exactly negated and the centre is exactly 0.
    points[i] = std::sin(std::numbers::pi * (2.0 * i - m) / (2.0 * m));
  }
  points.front() = -1.0;
  points.back() = 1.0;
  return points;
}

double weighted_integral(const WeightFunction& v, int j, IntegralPath path) {
  check_degree(j);
  const bool closed = path == IntegralPath::closed_form ||
                      (path == IntegralPath::automatic && v.kind() != WeightFunction::Kind::user);
  if (closed) {
    switch (v.kind()) {
      case WeightFunction::Kind::uniform:
        return j % 2 != 0 ? 0.0 : 2.0 / (1.0 - static_cast<double>(j) * j);
      case WeightFunction::Kind::arcsine:
        return j == 0 ? 2.0 : 0.0;
      case WeightFunction::Kind::user:
        throw std::invalid_argument("no closed form for a user weight");
    }
  }
  return v.integrate([j](double x) { return eval_T(j, x); });
}

}  // namespace lofd::cheb
