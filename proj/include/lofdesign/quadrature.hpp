#pragma once

#include <functional>
#include <span>

namespace lofd::quad {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::span<const double> nodes;
  std::span<const double> weights;
};

/// The fixed rule used by the adaptive integrator (computed once).
const GaussLegendreRule& gauss_legendre_rule();

/// Composite Gauss-Legendre integration of `fn` over [a, b] with adaptive
/// interval bisection. The integration range is first split at every
/// breakpoint inside (a, b), so jump discontinuities never sit inside a
/// panel. Throws QuadratureError if the absolute tolerance is not reached.
double integrate(const std::function<double(double)>& fn, double a, double b,
                 double abs_tol = 1e-10, std::span<const double> breakpoints = {});

}  // namespace lofd::quad
