#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "relmech/error.hpp"
#include "relmech/expression.hpp"

using relmech::Error;
using relmech::ErrorKind;
using relmech::Expression;

TEST_SUITE("expression") {

TEST_CASE("arithmetic and precedence") {
  CHECK(Expression("1 + 2 * 3", {})(std::span<const double>{}) == 7.0);
  CHECK(Expression("(1 + 2) * 3", {})(std::span<const double>{}) == 9.0);
  CHECK(Expression("2 ^ 3 ^ 2", {})(std::span<const double>{}) == 512.0);
  CHECK(Expression("-2 ^ 2", {})(std::span<const double>{}) == -4.0);
  CHECK(Expression("8 / 4 / 2", {})(std::span<const double>{}) == 1.0);
  CHECK(Expression("1e-3 * 2.5E2", {})(std::span<const double>{}) == doctest::Approx(0.25));
}

TEST_CASE("variables and functions") {
  const Expression e("0.5 * k * x^2 - cos(pi * y)", {"x", "y", "k"});
  const std::vector<double> v{2.0, 1.0, 3.0};
  CHECK(e(v) == doctest::Approx(6.0 + 1.0));
  const Expression r("-1 / r", {"x", "y", "r"});
  const std::vector<double> w{3.0, 4.0, 5.0};
  CHECK(r(w) == doctest::Approx(-0.2));
  CHECK(Expression("sqrt(abs(x)) + exp(log(2)) + tanh(0) + sinh(0) + cosh(0) + tan(0) + sin(0)", {"x"})(-9.0) ==
        doctest::Approx(6.0));
}

TEST_CASE("single variable call") {
  const Expression f("2 * x + 1", {"x"});
  CHECK(f(3.0) == 7.0);
  CHECK(f.source() == "2 * x + 1");
}

TEST_CASE("errors name the column") {
  auto expect = [](const char* src, const char* fragment) {
    try {
      Expression(src, {"x"});
      FAIL("expected a parse error for " << src);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Config);
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
  };
  expect("x +", "column");
  expect("y * 2", "y");
  expect("foo(x)", "foo");
  expect("(x + 1", "column");
  expect("x 1", "column");
  expect("", "column");
}

}
