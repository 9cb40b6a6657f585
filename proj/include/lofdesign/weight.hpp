#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lofd {

/// Sample of a tabulated density: (x, v(x)).
using GridSample = std::pair<double, double>;

/// A nonnegative density v on [-1, 1], normalized so that its mean against
/// the uniform distribution is one, i.e. (1/2) * integral of v over [-1, 1]
/// equals 1.
///
/// Three flavours exist. `uniform` (v = 1) and `arcsine`
/// (v = 2 / (pi sqrt(1 - x^2))) have closed-form integrals. `user` weights
/// wrap either an arbitrary callable or a tabulated grid; their integrals go
/// through adaptive quadrature, split at the declared breakpoints.
///
/// Instances are immutable and cheap to copy.
class WeightFunction {
 public:
  enum class Kind { uniform, arcsine, user };

  static WeightFunction uniform();
  static WeightFunction arcsine();

  /// Wraps `density`. When `normalize` is set, the density is divided by its
  /// computed normalization so the result satisfies the unit-mean condition;
  /// otherwise it is stored as given (used for raw AC parts).
  static WeightFunction from_function(std::function<double(double)> density,
                                      std::vector<double> jump_points = {},
                                      std::string label = "user", bool normalize = true);

  /// Piecewise-linear interpolation of tabulated samples, renormalized.
  /// Samples must be sorted by x, cover [-1, 1] and be nonnegative.
  static WeightFunction from_grid(std::vector<GridSample> samples);

  Kind kind() const noexcept;
  const std::string& label() const noexcept;

  /// Density value; +inf at the arcsine endpoints.
  double operator()(double x) const;

  /// Declared discontinuity locations in (-1, 1), sorted.
  std::span<const double> jump_points() const noexcept;

  /// Locations where quadrature panels must be split: the jump points plus,
  /// for grid weights, every interpolation node.
  std::span<const double> breakpoints() const noexcept;

  /// (1/2) * integral of the stored density over [-1, 1]; 1 up to round-off
  /// for normalized weights.
  double normalization_cert() const noexcept;

  /// Factor the raw input was divided by during normalization (1 if none).
  double renormalization_factor() const noexcept;

  /// (1/2) * integral of v over [-1, t], clamped to t in [-1, 1].
  double cumulative(double t) const;

  /// (1/2) * integral of x^n v(x) over [-1, 1].
  double moment(int n) const;

  /// Normalized samples if this weight came from a grid, else empty.
  std::span<const GridSample> grid() const noexcept;

  /// Integral over [-1, 1] of fn(x) v(x) dx (Lebesgue measure). The arcsine
  /// weight is handled through x = cos(theta), which removes the endpoint
  /// singularity.
  double integrate(const std::function<double(double)>& fn, double abs_tol = 1e-10) const;

 private:
  struct State;
  explicit WeightFunction(std::shared_ptr<const State> state);
  std::shared_ptr<const State> state_;
};

}  // namespace lofd
