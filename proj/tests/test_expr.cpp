#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "lofdesign/chebyshev.hpp"
#include "lofdesign/expr.hpp"

using namespace lofd;

TEST_CASE("arithmetic and precedence") {
  CHECK(parse_expression("1 + 2 * 3").eval(0.0) == 7.0);
  CHECK(parse_expression("(1 + 2) * 3").eval(0.0) == 9.0);
  CHECK(parse_expression("2 ^ 3 ^ 2").eval(0.0) == 512.0);
  CHECK(parse_expression("-x^2").eval(3.0) == -9.0);
  CHECK(parse_expression("x / 4 - 1").eval(2.0) == -0.5);
  CHECK(parse_expression("1.5e1").eval(0.0) == 15.0);
  CHECK(parse_expression("x*x").eval(-0.5) == 0.25);
}

TEST_CASE("Chebyshev calls") {
  const auto t3 = parse_expression("T_3(x)");
  const auto t3b = parse_expression("T3(x)");
  for (double x : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
    CHECK(t3.eval(x) == doctest::Approx(cheb::eval_T(3, x)).epsilon(1e-14));
    CHECK(t3b.eval(x) == t3.eval(x));
  }
  CHECK(parse_expression("2*T_2(x/2) + 1").eval(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(parse_expression("x^2").description == "x^2");
}

TEST_CASE("malformed input is rejected") {
  for (const char* bad : {"", "1 +", "(x", "y", "T_(x)", "T_2 x", "2 3", "x ^", "3 $ 4"})
    CHECK_THROWS_AS(parse_expression(bad), std::invalid_argument);
}
