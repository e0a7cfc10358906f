#include "support.hpp"

#include "relmech/derive_metric.hpp"
#include "relmech/quadrature.hpp"

using namespace relmech;
using relmech::test::vec;

TEST_SUITE("derive_metric") {

TEST_CASE("linear restoring force gives the oscillator metric") {
  const AccelerationField a = [](const Vectord& x) -> Vectord { return -x; };
  const auto derived = derive_metric_from_eom(a, {1, 1}, {vec({-2}), vec({2}), 50, 3});
  REQUIRE(derived.samples.size() == 50);
  for (const auto& s : derived.samples) {
    const double x = s.x[0];
    CHECK(std::abs(s.potential - x * x / 2) < 1e-12);
    CHECK(std::abs(s.g00 - (1 + x * x)) < 1e-12);
    CHECK(std::abs(metric_g00(derived.metric, s.x) - s.g00) < 1e-12);
  }
}

TEST_CASE("inverse-square force with the reference at infinity gives the Kepler metric") {
  const AccelerationField a = [](const Vectord& x) -> Vectord { return -x / std::pow(x.norm(), 3); };
  const auto derived =
      derive_metric_from_eom(a, {2, 1}, {vec({0.5, 0.5}), vec({3, 3}), 40, 5}, MetricReference::infinity());
  for (const auto& s : derived.samples) {
    const double r = s.x.norm();
    CHECK(std::abs(s.potential + 1 / r) < 1e-10);
    CHECK(std::abs(s.g00 - (1 - 2 / (4 * r))) < 1e-10);
  }
  CHECK(derived.max_path_mismatch < kDerivePathTolerance);
}

TEST_CASE("zero field gives flat space") {
  const AccelerationField a = [](const Vectord& x) -> Vectord { return Vectord::Zero(x.size()); };
  const auto derived = derive_metric_from_eom(a, {1, 1}, {vec({-1, -1, -1}), vec({1, 1, 1}), 20, 1});
  for (const auto& s : derived.samples) {
    CHECK(s.potential == 0.0);
    CHECK(s.g00 == 1.0);
  }
}

TEST_CASE("rotational fields are not potentials") {
  const AccelerationField a = [](const Vectord& x) -> Vectord { return vec({-x[1], x[0]}); };
  try {
    derive_metric_from_eom(a, {1, 1}, {vec({-1, -1}), vec({1, 1}), 20, 1});
    FAIL("expected a not-a-potential error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAPotential);
  }
}

TEST_CASE("reference point shifts the additive constant") {
  const AccelerationField a = [](const Vectord& x) -> Vectord { return -2 * x; };
  const auto derived = derive_metric_from_eom(a, {1, 1}, {vec({-1, -1}), vec({1, 1}), 30, 2},
                                              MetricReference::at(vec({1, 0})));
  for (const auto& s : derived.samples) CHECK(std::abs(s.potential - (s.x.squaredNorm() - 1)) < 1e-12);
}

TEST_CASE("derived gradient is -m a") {
  const AccelerationField a = [](const Vectord& x) -> Vectord { return vec({-x[0] * x[0] * x[0], -x[1]}); };
  const auto derived = derive_metric_from_eom(a, {1, 3}, {vec({-1, -1}), vec({1, 1}), 10, 9});
  const Vectord x = vec({0.3, -0.2});
  CHECK((derived.metric.potential().gradient(x) + 3 * a(x)).norm() < 1e-15);
}

TEST_CASE("sampling is seeded") {
  const AccelerationField a = [](const Vectord& x) -> Vectord { return -x; };
  const auto one = derive_metric_from_eom(a, {1, 1}, {vec({-1}), vec({1}), 10, 42});
  const auto two = derive_metric_from_eom(a, {1, 1}, {vec({-1}), vec({1}), 10, 42});
  for (std::size_t i = 0; i < one.samples.size(); ++i) CHECK(one.samples[i].x == two.samples[i].x);
}

TEST_CASE("domain validation") {
  const AccelerationField a = [](const Vectord& x) -> Vectord { return -x; };
  CHECK_THROWS_AS(derive_metric_from_eom(a, {1, 1}, {vec({1}), vec({-1}), 10, 1}), Error);
  CHECK_THROWS_AS(derive_metric_from_eom(a, {1, 1}, {vec({-1, 0}), vec({1}), 10, 1}), Error);
  CHECK_THROWS_AS(derive_metric_from_eom(a, {1, 1}, {vec({-1}), vec({1}), 0, 1}), Error);
}

TEST_CASE("Gauss-Kronrod quadrature") {
  const auto poly = integrate_gk([](double x) { return x * x * x * x; }, 0, 2);
  CHECK(poly.value == doctest::Approx(32.0 / 5).epsilon(1e-14));
  const auto peaked = integrate_gk([](double x) { return 1 / (1e-4 + x * x); }, -1, 1);
  CHECK(peaked.value == doctest::Approx(2 * std::atan(1e2) / 1e-2).epsilon(1e-10));
  const auto endpoint = integrate_gk([](double x) { return 1 / std::sqrt(x); }, 0, 1);
  CHECK(endpoint.value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(integrate_gk([](double x) { return std::sin(x); }, 1, 1).value == 0.0);
}

}
