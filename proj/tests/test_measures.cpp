#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "lofdesign/errors.hpp"
#include "lofdesign/measures.hpp"
#include "lofdesign/optimal.hpp"

using namespace lofd;

namespace {

template <class F>
double simpson(F f, double a, double b, int panels = 200000) {
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

DesignMeasure half_uniform_half_endpoints() {
  return DesignMeasure({{-1.0, 0.25}, {1.0, 0.25}}, 0.5, WeightFunction::uniform());
}

DesignMeasure random_design(std::mt19937_64& rng, int max_atoms) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int count = 1 + static_cast<int>(unit(rng) * max_atoms);
  const double scale = unit(rng) < 0.5 ? 0.0 : unit(rng);
  std::vector<Atom> atoms;
  double total = 0.0;
  for (int i = 0; i < count; ++i) {
    atoms.push_back({-1.0 + 2.0 * unit(rng), 0.05 + unit(rng)});
    total += atoms.back().mass;
  }
  for (Atom& a : atoms) a.mass *= (1.0 - scale) / total;
  std::optional<WeightFunction> density;
  if (scale > 0.0) density = unit(rng) < 0.5 ? WeightFunction::uniform() : WeightFunction::arcsine();
  return DesignMeasure(atoms, scale, density);
}

}  // namespace

TEST_CASE("DesignMeasure validates its invariants") {
  CHECK_THROWS_AS(DesignMeasure::atomic({{0.0, 0.6}}), std::invalid_argument);
  CHECK_THROWS_AS(DesignMeasure::atomic({{0.0, 0.5}, {0.0, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(DesignMeasure::atomic({{1.5, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(DesignMeasure({{0.0, 0.5}}, 0.5), std::invalid_argument);
  const auto xi = DesignMeasure::atomic({{0.5, 0.5}, {-0.5, 0.5}});
  CHECK(xi.atoms()[0].location == -0.5);
}

TEST_CASE("moment_matrix examples") {
  const auto m2 = moment_matrix(kw_design(2), PolynomialModel(2));
  CHECK(m2.isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-14));

  Eigen::MatrixXd expected3(3, 3);
  expected3 << 1, 0, 0.5, 0, 0.5, 0, 0.5, 0, 0.5;
  CHECK((moment_matrix(kw_design(3), PolynomialModel(3)) - expected3).cwiseAbs().maxCoeff() <= 1e-14);

  // Simpson oracle for the moments of the uniform distribution
  const double m2_oracle = 0.5 * simpson([](double x) { return x * x; }, -1.0, 1.0);
  const auto mu = moment_matrix(DesignMeasure::continuous(WeightFunction::uniform()), PolynomialModel(2));
  CHECK(mu(0, 0) == doctest::Approx(1.0));
  CHECK(mu(0, 1) == 0.0);
  CHECK(mu(1, 1) == doctest::Approx(m2_oracle).epsilon(1e-12));
}

TEST_CASE("moment_matrix is Hankel, symmetric and linear in the measure") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + trial % 7;
    const PolynomialModel model(k);
    const auto a = random_design(rng, 2 * k);
    const auto b = random_design(rng, 2 * k);
    const double w = unit(rng);

    // mixture w a + (1 - w) b, written out atom by atom
    std::vector<Atom> atoms;
    for (const Atom& atom : a.atoms()) atoms.push_back({atom.location, w * atom.mass});
    for (const Atom& atom : b.atoms()) atoms.push_back({atom.location, (1 - w) * atom.mass});
    const auto ma = moment_matrix(a, model);
    const auto mb = moment_matrix(b, model);
    Eigen::MatrixXd mix = w * ma + (1 - w) * mb;
    // continuous parts are added separately since a mixture of two densities
    // is not a single-density design
    Eigen::MatrixXd atomic_only = Eigen::MatrixXd::Zero(k, k);
    for (const Atom& atom : atoms) atomic_only += atom.mass * model.regressors(atom.location) * model.regressors(atom.location).transpose();
    Eigen::MatrixXd cont = Eigen::MatrixXd::Zero(k, k);
    if (a.ac_scale() > 0) cont += w * a.ac_scale() * moment_matrix(DesignMeasure::continuous(*a.ac_density()), model);
    if (b.ac_scale() > 0) cont += (1 - w) * b.ac_scale() * moment_matrix(DesignMeasure::continuous(*b.ac_density()), model);
    CHECK((mix - (atomic_only + cont)).cwiseAbs().maxCoeff() <= 1e-10);

    CHECK(ma == ma.transpose());
    for (int i = 0; i + 1 < k; ++i)
      for (int j = 1; j < k; ++j) CHECK(ma(i, j) == ma(i + 1, j - 1));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ma);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-14);
    if (a.ac_scale() > 0 || static_cast<int>(a.atoms().size()) >= k) CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("lof_efficiency") {
  const auto uniform = WeightFunction::uniform();
  CHECK(lof_efficiency(kw_design(4), uniform) == 0.0);
  CHECK(lof_efficiency(half_uniform_half_endpoints(), uniform) == doctest::Approx(0.5).epsilon(1e-12));
  // arcsine density dominates 2/pi times the uniform one
  const DesignMeasure arc({{0.0, 0.5}}, 0.5, WeightFunction::arcsine());
  CHECK(lof_efficiency(arc, uniform) == doctest::Approx(0.5 * 2.0 / std::numbers::pi).epsilon(1e-6));
  // uniform part cannot dominate the arcsine weight near the endpoints
  CHECK(lof_efficiency(half_uniform_half_endpoints(), WeightFunction::arcsine()) < 0.5 * 0.002);

  // a step density: only the lower half matters when v vanishes on the upper half
  const auto lower = WeightFunction::from_function([](double x) { return x < 0 ? 2.0 : 0.0; }, {0.0});
  const auto step = WeightFunction::from_function([](double x) { return x < 0 ? 1.5 : 0.5; }, {0.0});
  const DesignMeasure stepped({}, 1.0, step);
  CHECK(lof_efficiency(stepped, lower) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(lof_efficiency(stepped, uniform) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("b_functional examples") {
  const PolynomialModel line(2);
  const auto uniform = DesignMeasure::continuous(WeightFunction::uniform());
  const RegressionFunction in_span{[](double x) { return 3 * x - 1; }, "3x-1"};
  const RegressionFunction square{[](double x) { return x * x; }, "x^2"};
  CHECK(b_functional(in_span, uniform, 1.0, line) == doctest::Approx(0.0));

  // oracle: (1/2) * integral of (x^2 - 1/3)^2 by Simpson
  const double oracle = 0.5 * simpson([](double x) { return (x * x - 1.0 / 3.0) * (x * x - 1.0 / 3.0); }, -1.0, 1.0);
  CHECK(std::abs(oracle - 4.0 / 45.0) <= 1e-13);
  CHECK(std::abs(b_functional(square, uniform, 1.0, line) - oracle) <= 1e-10);

  CHECK(b_functional(square, kw_design(2), 1.0, line) == doctest::Approx(0.0));
  CHECK_THROWS_AS(b_functional(square, DesignMeasure::atomic({{0.3, 1.0}}), 1.0, line), SingularInformationError);
  CHECK_THROWS_AS(b_functional(square, uniform, 0.0, line), std::invalid_argument);
}

TEST_CASE("b_functional vanishes on the model span and scales with 1/sigma^2") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> coef(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + trial % 5;
    const PolynomialModel model(k);
    const auto xi = construct(k, 0.3, WeightFunction::uniform()).design;
    std::vector<double> c(k);
    for (double& value : c) value = coef(rng);
    const RegressionFunction g{[c](double x) {
                                 double s = 0.0;
                                 for (std::size_t j = c.size(); j-- > 0;) s = s * x + c[j];
                                 return s;
                               },
                               "poly"};
    const double b = b_functional(g, xi, 1.0, model);
    CHECK(b >= 0.0);
    CHECK(b <= 1e-9);
  }
  const PolynomialModel model(3);
  const auto xi = construct(3, 0.5, WeightFunction::uniform()).design;
  const RegressionFunction g{[](double x) { return std::exp(x); }, "exp"};
  const double base = b_functional(g, xi, 1.0, model);
  CHECK(base > 0.0);
  CHECK(b_functional(g, xi, 4.0, model) == doctest::Approx(base / 4.0).epsilon(1e-12));
}

TEST_CASE("cdf and quantile examples") {
  const auto uniform = DesignMeasure::continuous(WeightFunction::uniform());
  const auto endpoints = kw_design(2);
  const auto mixed = half_uniform_half_endpoints();

  CHECK(cdf(uniform, 0.0) == doctest::Approx(0.5));
  CHECK(cdf(endpoints, -1.0) == 0.5);
  CHECK(cdf(endpoints, -1.0 - 1e-9) == 0.0);
  CHECK(cdf(mixed, 0.0) == doctest::Approx(0.5));
  CHECK(cdf(mixed, 1.0) == 1.0);

  CHECK(std::abs(quantile(uniform, 0.5)) <= 1e-12);
  CHECK(quantile(endpoints, 0.2) == -1.0);
  CHECK(std::abs(quantile(mixed, 0.5)) <= 1e-12);
  CHECK(quantile(mixed, 1.0) == 1.0);
  CHECK_THROWS_AS(quantile(mixed, 1.5), std::invalid_argument);
}

TEST_CASE("discretize examples") {
  const auto d1 = discretize(DesignMeasure::continuous(WeightFunction::uniform()), 3);
  CHECK(d1[0] == -1.0);
  CHECK(std::abs(d1[1]) <= 1e-12);
  CHECK(d1[2] == 1.0);
  CHECK(discretize(kw_design(2), 4) == std::vector<double>{-1.0, -1.0, 1.0, 1.0});
  const auto d3 = discretize(half_uniform_half_endpoints(), 5);
  CHECK(d3[0] == -1.0);
  CHECK(d3[1] == -1.0);
  CHECK(std::abs(d3[2]) <= 1e-12);
  CHECK(d3[3] == 1.0);
  CHECK(d3[4] == 1.0);
  CHECK_THROWS_AS(discretize(kw_design(2), 1), std::invalid_argument);
}

TEST_CASE("quantile round trip and sorted discretization") {
  const std::vector<DesignMeasure> designs{
      half_uniform_half_endpoints(), kw_design(5), construct(5, 0.5, WeightFunction::uniform()).design,
      construct(6, 0.9, WeightFunction::arcsine()).design, DesignMeasure::continuous(WeightFunction::arcsine())};
  for (const auto& xi : designs) {
    for (int i = 0; i <= 1000; ++i) {
      const double u = i / 1000.0;
      CHECK(cdf(xi, quantile(xi, u)) >= u);
    }
    const auto points = discretize(xi, 257);
    CHECK(std::is_sorted(points.begin(), points.end()));
    CHECK(points.front() >= -1.0);
    CHECK(points.back() <= 1.0);
  }
}

TEST_CASE("discretized design converges uniformly") {
  const int n = 10000;
  const std::vector<DesignMeasure> designs{half_uniform_half_endpoints(), construct(4, 0.5, WeightFunction::uniform()).design,
                                           construct(3, 0.6, WeightFunction::arcsine()).design};
  for (const auto& xi : designs) {
    const auto points = discretize(xi, n);
    // Kolmogorov distance; the empirical CDF is a step function, so the
    // supremum is attained at the left/right limits around each point.
    double worst = 0.0;
    std::size_t i = 0;
    while (i < points.size()) {
      std::size_t j = i;
      while (j < points.size() && points[j] == points[i]) ++j;
      const double at = static_cast<double>(j) / n;
      const double before = static_cast<double>(i) / n;
      double atom = 0.0;
      for (const Atom& a : xi.atoms())
        if (a.location == points[i]) atom = a.mass;
      const double f = cdf(xi, points[i]);
      worst = std::max({worst, std::abs(at - f), std::abs(before - (f - atom))});
      const double next = j < points.size() ? points[j] : 1.0;
      if (next > points[i]) {
        double next_atom = 0.0;
        for (const Atom& a : xi.atoms())
          if (a.location == next) next_atom = a.mass;
        worst = std::max(worst, std::abs(at - (cdf(xi, next) - next_atom)));
      }
      i = j;
    }
    CHECK(worst <= 2.0 / (n - 1));
  }
}

TEST_CASE("empirical measure merges repeated points") {
  const std::vector<double> points{-1.0, -1.0, 0.0, 1.0};
  const auto xi = empirical_measure(points);
  REQUIRE(xi.atoms().size() == 3);
  CHECK(xi.atoms()[0].mass == 0.5);
  CHECK(xi.atoms()[1].mass == 0.25);
}
