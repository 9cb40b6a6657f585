#pragma once

#include <vector>

#include "lofdesign/weight.hpp"

namespace lofd::cheb {

/// Highest polynomial count supported by the design routines.
inline constexpr int kMaxParameters = 32;

/// T_j(x) = cos(j arccos x). Throws std::domain_error if |x| > 1 + 1e-12;
/// arguments inside that slack are clamped onto [-1, 1].
double eval_T(int j, double x);

/// T_j(x) by the three-term recurrence. Valid for any real x; used as a
/// cross-check of eval_T.
double eval_T_recurrence(int j, double x);

/// Extremal points of T_{k-1} on [-1, 1] in increasing order:
/// x_i = cos(pi (k-1-i) / (k-1)), i = 0..k-1.
std::vector<double> extrema(int k);

enum class IntegralPath { automatic, closed_form, quadrature };

/// Integral over [-1, 1] of T_j(x) v(x) dx (Lebesgue measure, not the
/// normalized uniform distribution). Uniform and arcsine weights use the
/// closed forms unless `path` forces quadrature.
double weighted_integral(const WeightFunction& v, int j, IntegralPath path = IntegralPath::automatic);

}  // namespace lofd::cheb
