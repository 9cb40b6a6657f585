#include "lofdesign/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lofdesign/quadrature.hpp"

namespace lofd {

struct WeightFunction::State {
  Kind kind = Kind::uniform;
  std::string label;
  std::function<double(double)> density;
  std::vector<double> jumps;
  std::vector<double> breaks;
  double cert = 1.0;
  double renorm = 1.0;
  std::vector<GridSample> grid;
  std::vector<double> grid_cumulative;  // (1/2) integral up to each node
};

namespace {

double arcsine_density(double x) {
  const double s = 1.0 - x * x;
  if (s <= 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 / (std::numbers::pi * std::sqrt(s));
}

void check_nonnegative(const std::function<double(double)>& density) {
  constexpr int kProbe = 1025;
  for (int i = 0; i < kProbe; ++i) {
    const double x = -1.0 + 2.0 * i / (kProbe - 1);
    const double value = density(x);
    if (value < 0.0 || std::isnan(value)) {
      std::ostringstream msg;
      msg << "weight density must be nonnegative; v(" << x << ") = " << value;
      throw std::invalid_argument(msg.str());
    }
  }
}

double interpolate(std::span<const GridSample> grid, double x) {
  x = std::clamp(x, -1.0, 1.0);
  auto it = std::upper_bound(grid.begin(), grid.end(), x,
                             [](double value, const GridSample& s) { return value < s.first; });
  if (it == grid.begin()) return grid.front().second;
  if (it == grid.end()) return grid.back().second;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (x - lo.first) / (hi.first - lo.first);
  return lo.second + t * (hi.second - lo.second);
}

}  // namespace

WeightFunction::WeightFunction(std::shared_ptr<const State> state) : state_(std::move(state)) {}

WeightFunction WeightFunction::uniform() {
  static const auto state = [] {
    auto s = std::make_shared<State>();
    s->kind = Kind::uniform;
    s->label = "uniform";
    s->density = [](double) { return 1.0; };
    return s;
  }();
  return WeightFunction(state);
}

WeightFunction WeightFunction::arcsine() {
  static const auto state = [] {
    auto s = std::make_shared<State>();
    s->kind = Kind::arcsine;
    s->label = "arcsine";
    s->density = arcsine_density;
    return s;
  }();
  return WeightFunction(state);
}

WeightFunction WeightFunction::from_function(std::function<double(double)> density,
                                             std::vector<double> jump_points, std::string label,
                                             bool normalize) {
  if (!density) throw std::invalid_argument("weight density is empty");
  check_nonnegative(density);
  std::erase_if(jump_points, [](double x) { return !(x > -1.0 && x < 1.0); });
  std::sort(jump_points.begin(), jump_points.end());
  jump_points.erase(std::unique(jump_points.begin(), jump_points.end()), jump_points.end());

  auto s = std::make_shared<State>();
  s->kind = Kind::user;
  s->label = std::move(label);
  s->jumps = jump_points;
  s->breaks = jump_points;
  const double raw = 0.5 * quad::integrate(density, -1.0, 1.0, 1e-12, s->breaks);
  if (!(raw > 0.0) || !std::isfinite(raw))
    throw std::invalid_argument("weight density has zero or non-finite total mass");
  if (normalize) {
    s->renorm = raw;
    s->density = [density = std::move(density), raw](double x) { return density(x) / raw; };
    s->cert = 0.5 * quad::integrate(s->density, -1.0, 1.0, 1e-12, s->breaks);
  } else {
    s->density = std::move(density);
    s->cert = raw;
  }
  return WeightFunction(s);
}

WeightFunction WeightFunction::from_grid(std::vector<GridSample> samples) {
  if (samples.size() < 2) throw std::invalid_argument("weight grid needs at least two samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [x, v] = samples[i];
    if (!std::isfinite(x) || !std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("weight grid samples must be finite with v >= 0");
    if (i > 0 && !(x > samples[i - 1].first))
      throw std::invalid_argument("weight grid abscissae must be strictly increasing");
  }
  if (std::abs(samples.front().first + 1.0) > 1e-9 || std::abs(samples.back().first - 1.0) > 1e-9)
    throw std::invalid_argument("weight grid must span exactly [-1, 1]");
  samples.front().first = -1.0;
  samples.back().first = 1.0;

  // Trapezoid rule is exact for the piecewise-linear interpolant.
  double raw = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i)
    raw += 0.25 * (samples[i].first - samples[i - 1].first) * (samples[i].second + samples[i - 1].second);
  if (!(raw > 0.0)) throw std::invalid_argument("weight grid has zero total mass");

  auto s = std::make_shared<State>();
  s->kind = Kind::user;
  s->label = "grid";
  s->renorm = raw;
  for (auto& sample : samples) sample.second /= raw;
  s->grid = std::move(samples);
  s->grid_cumulative.resize(s->grid.size(), 0.0);
  for (std::size_t i = 1; i < s->grid.size(); ++i) {
    const auto& a = s->grid[i - 1];
    const auto& b = s->grid[i];
    s->grid_cumulative[i] = s->grid_cumulative[i - 1] + 0.25 * (b.first - a.first) * (a.second + b.second);
  }
  s->cert = s->grid_cumulative.back();
  for (std::size_t i = 1; i + 1 < s->grid.size(); ++i) s->breaks.push_back(s->grid[i].first);
  std::span<const GridSample> view = s->grid;
  s->density = [view](double x) { return interpolate(view, x); };
  return WeightFunction(s);
}

WeightFunction::Kind WeightFunction::kind() const noexcept { return state_->kind; }
const std::string& WeightFunction::label() const noexcept { return state_->label; }
double WeightFunction::operator()(double x) const { return state_->density(x); }
std::span<const double> WeightFunction::jump_points() const noexcept { return state_->jumps; }
std::span<const double> WeightFunction::breakpoints() const noexcept { return state_->breaks; }
double WeightFunction::normalization_cert() const noexcept { return state_->cert; }
double WeightFunction::renormalization_factor() const noexcept { return state_->renorm; }
std::span<const GridSample> WeightFunction::grid() const noexcept { return state_->grid; }

double WeightFunction::cumulative(double t) const {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return state_->cert;
  switch (state_->kind) {
    case Kind::uniform:
      return 0.5 * (t + 1.0);
    case Kind::arcsine:
      return 0.5 + std::asin(t) / std::numbers::pi;
    case Kind::user:
      break;
  }
  if (!state_->grid.empty()) {
    const auto& grid = state_->grid;
    auto it = std::upper_bound(grid.begin(), grid.end(), t,
                               [](double value, const GridSample& s) { return value < s.first; });
    const std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
    const double vt = interpolate(grid, t);
    return state_->grid_cumulative[i] + 0.25 * (t - grid[i].first) * (grid[i].second + vt);
  }
  return 0.5 * quad::integrate(state_->density, -1.0, t, 1e-12, state_->breaks);
}

double WeightFunction::moment(int n) const {
  if (n < 0) throw std::invalid_argument("moment order must be nonnegative");
  switch (state_->kind) {
    case Kind::uniform:
      return n % 2 == 0 ? 1.0 / (n + 1.0) : 0.0;
    case Kind::arcsine: {
      if (n % 2 != 0) return 0.0;
      // binomial(n, n/2) / 2^n, built up as a product of ratios
      double value = 1.0;
      for (int m = 2; m <= n; m += 2) value *= (m - 1.0) / m;
      return value;
    }
    case Kind::user:
      break;
  }
  return 0.5 * integrate([n](double x) { return std::pow(x, n); }, 1e-12);
}

double WeightFunction::integrate(const std::function<double(double)>& fn, double abs_tol) const {
  switch (state_->kind) {
    case Kind::uniform:
      return quad::integrate(fn, -1.0, 1.0, abs_tol);
    case Kind::arcsine: {
      // v(cos t) sin t = 2/pi on (0, pi)
      auto integrand = [&fn](double theta) { return fn(std::cos(theta)) * (2.0 / std::numbers::pi); };
      return quad::integrate(integrand, 0.0, std::numbers::pi, abs_tol);
    }
    case Kind::user:
      break;
  }
  const auto& density = state_->density;
  auto integrand = [&fn, &density](double x) { return fn(x) * density(x); };
  return quad::integrate(integrand, -1.0, 1.0, abs_tol, state_->breaks);
}

}  // namespace lofd
