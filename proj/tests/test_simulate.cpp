#include <cmath>

#include "doctest.h"
#include "lofdesign/errors.hpp"
#include "lofdesign/optimal.hpp"
#include "lofdesign/simulate.hpp"

using namespace lofd;

namespace {

SimConfig config(DesignMeasure xi, int k, int n, int reps, std::uint64_t seed = 11) {
  SimConfig cfg{std::move(xi)};
  cfg.k = k;
  cfg.n = n;
  cfg.reps = reps;
  cfg.seed = seed;
  return cfg;
}

const RegressionFunction kSquare{[](double x) { return x * x; }, "x^2"};

}  // namespace

TEST_CASE("noise-free data give zero variance") {
  auto cfg = config(kw_design(3), 3, 30, 50);
  cfg.sigma = 0.0;
  cfg.truth = {[](double x) { return 1.0 + x - 2.0 * x * x; }, "poly"};
  const auto result = simulate_lse_variance(cfg);
  CHECK(result.variance_est == 0.0);
  CHECK(result.variance_theory == 0.0);
}

TEST_CASE("variance_theory on the discretized KW designs") {
  // X^T X = diag(n, n) for n/2 points at each endpoint
  CHECK(simulate_lse_variance(config(kw_design(2), 2, 100, 2)).variance_theory ==
        doctest::Approx(0.01).epsilon(1e-12));
  // 25 / 49 / 25 points at -1, 0, 1: hand inversion gives 4 / 99 only in the limit
  const double theory = simulate_lse_variance(config(kw_design(3), 3, 99, 2)).variance_theory;
  CHECK(theory == doctest::Approx(1.0 / 49 + 1.0 / 50).epsilon(1e-12));
  CHECK(theory == doctest::Approx(4.0 / 99).epsilon(0.01));
}

TEST_CASE("results are reproducible and lane-invariant") {
  auto cfg = config(construct(3, 0.5, WeightFunction::uniform()).design, 3, 60, 3000, 424242);
  const auto a = simulate_lse_variance(cfg);
  const auto b = simulate_lse_variance(cfg);
  CHECK(a.variance_est == b.variance_est);
  cfg.lanes = 4;
  const auto c = simulate_lse_variance(cfg);
  CHECK(a.variance_est == c.variance_est);
  cfg.lanes = 7;
  const auto d = lof_detectability(cfg, kSquare, 0.05);
  cfg.lanes = 1;
  const auto e = lof_detectability(cfg, kSquare, 0.05);
  REQUIRE(d.power_est.has_value());
  CHECK(*d.power_est == *e.power_est);
  CHECK(d.variance_est == e.variance_est);

  cfg.seed = 424243;
  CHECK(simulate_lse_variance(cfg).variance_est != a.variance_est);
  CHECK(replicate_seed(1, 0) != replicate_seed(1, 1));
  CHECK(replicate_seed(1, 0) != replicate_seed(2, 0));
}

TEST_CASE("rank-deficient discretizations are reported") {
  CHECK_THROWS_AS(simulate_lse_variance(config(DesignMeasure::atomic({{-1.0, 0.5}, {1.0, 0.5}}), 3, 20, 10)),
                  RankDeficiencyError);
  CHECK_THROWS_AS(simulate_lse_variance(config(kw_design(2), 2, 1, 10)), std::invalid_argument);
}

TEST_CASE("KW designs cannot detect lack of fit") {
  for (int k = 2; k <= 5; ++k) {
    const auto result = lof_detectability(config(kw_design(k), k, 100, 200), kSquare, 0.05);
    CHECK(result.undetectable);
    CHECK_FALSE(result.power_est.has_value());
  }
}

TEST_CASE("size of the F test under the null") {
  const int reps = 4000;
  auto cfg = config(construct(2, 0.5, WeightFunction::uniform()).design, 2, 60, reps, 3);
  cfg.truth = {[](double x) { return 2.0 - x; }, "2-x"};
  const auto result = lof_detectability(cfg, cfg.truth, 0.05);
  const double sd = std::sqrt(0.05 * 0.95 / reps);
  CHECK(std::abs(*result.power_est - 0.05) <= 4 * sd);
}

TEST_CASE("power follows the ordering of the B-functional") {
  // projection of x^2 onto span{1, x} is the constant 1 - 2r/3, which gives
  // B = 8r/15 - 4r^2/9; it peaks at r = 0.6
  const auto oracle = [](double r) { return 8.0 * r / 15.0 - 4.0 * r * r / 9.0; };
  const auto uniform = WeightFunction::uniform();
  const int reps = 4000;
  const double rs[] = {0.25, 0.5, 0.75};
  double power[3];
  for (int i = 0; i < 3; ++i) {
    const auto xi = construct(2, rs[i], uniform).design;
    CHECK(b_functional(kSquare, xi, 1.0, PolynomialModel(2)) == doctest::Approx(oracle(rs[i])).epsilon(1e-10));
    const auto result = lof_detectability(config(xi, 2, 200, reps, 77), kSquare, 0.05);
    REQUIRE(result.power_est.has_value());
    power[i] = *result.power_est;
    CHECK(power[i] > 0.05 + 3 * std::sqrt(0.05 * 0.95 / reps));
  }
  for (int i = 0; i + 1 < 3; ++i) {
    const double sd = std::sqrt((power[i] * (1 - power[i]) + power[i + 1] * (1 - power[i + 1])) / reps);
    if (oracle(rs[i + 1]) >= oracle(rs[i]))
      CHECK(power[i + 1] >= power[i] - 3 * sd);
    else
      CHECK(power[i + 1] <= power[i] + 3 * sd);
  }
  CHECK(power[1] > power[0]);
}

TEST_CASE("variance estimate matches theory for both noise laws") {
  for (NoiseKind noise : {NoiseKind::normal, NoiseKind::uniform}) {
    auto cfg = config(construct(3, 0.5, WeightFunction::uniform()).design, 3, 80, 20000, 9);
    cfg.noise = noise;
    cfg.sigma = 0.7;
    cfg.lanes = 4;
    const auto result = simulate_lse_variance(cfg);
    // relative sd of a sample variance is about sqrt(2 / reps) = 1%
    CHECK(result.variance_est / result.variance_theory == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("r-efficient designs pay the predicted variance factor") {
  const int n = 120;
  auto kw = config(kw_design(3), 3, n, 20000, 5);
  auto eff = config(construct(3, 0.6, WeightFunction::uniform()).design, 3, n, 20000, 6);
  kw.lanes = eff.lanes = 4;
  const auto a = simulate_lse_variance(kw);
  const auto b = simulate_lse_variance(eff);
  const double predicted = b.variance_theory / a.variance_theory;
  CHECK(predicted > 1.0);
  CHECK((b.variance_est / a.variance_est) / predicted == doctest::Approx(1.0).epsilon(0.1));

  // the finite-n factor approaches the ratio of limiting information matrices
  const PolynomialModel model(3);
  const double limit = solve_information(moment_matrix(eff.design, model), model.target())[2] /
                       solve_information(moment_matrix(kw.design, model), model.target())[2];
  CHECK(predicted == doctest::Approx(limit).epsilon(0.1));
}
