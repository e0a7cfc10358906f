#include "support.hpp"

#include "relmech/kinematics.hpp"
#include "relmech/lorentz.hpp"

using namespace relmech;
using relmech::test::vec;

namespace {

// A metric whose g00 is the same constant everywhere.
StaticMetric<double> uniform_metric(double g00) {
  return {{"uniform", [g00](const Vectord&) { return (g00 - 1) / 2; }}, {1, 1}, 1};
}

}  // namespace

TEST_SUITE("lorentz") {

TEST_CASE("zero beta gives the identity") {
  for (double g00 : {0.1, 0.5, 1.0, 1.8})
    for (int dim : {2, 4}) CHECK((build_boost(g00, 0.0, dim).entries - BoostEntries<double>::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("flat boost is the special-relativity boost") {
  const auto b = build_boost(1.0, 0.6, 2);
  CHECK(b.gamma == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(b.entries(0, 0) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(b.entries(1, 1) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(b.entries(0, 1) == doctest::Approx(-0.75).epsilon(1e-15));
  CHECK(b.entries(1, 0) == doctest::Approx(-0.75).epsilon(1e-15));
}

TEST_CASE("boost at g00 = 0.5, beta = 0.5") {
  const auto b = build_boost(0.5, 0.5, 4);
  CHECK(b.gamma == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(b.entries(0, 0) == doctest::Approx(1.41421356237).epsilon(1e-11));
  CHECK(b.entries(1, 1) == doctest::Approx(1.41421356237).epsilon(1e-11));
  CHECK(b.entries(0, 1) == doctest::Approx(-1.41421356237).epsilon(1e-11));
  CHECK(b.entries(1, 0) == doctest::Approx(-0.70710678119).epsilon(1e-10));
  CHECK(b.entries(2, 2) == 1.0);
  CHECK(b.entries(3, 3) == 1.0);
  CHECK(b.entries(0, 2) == 0.0);
}

TEST_CASE("superluminal frames are rejected") {
  try {
    build_boost(0.5, 0.75, 2);
    FAIL("expected a superluminal-frame error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SuperluminalFrame);
  }
  CHECK_THROWS_AS(build_boost(1.0, 1.0, 2), Error);
  CHECK_THROWS_AS(build_boost(1.0, 0.1, 3), Error);
}

TEST_CASE("invariance residual") {
  const auto metric = test::hooke(1, 1, 2);
  const Vectord x = vec({0.7});
  const auto b = build_boost(metric, x, 0.4, 2);
  CHECK(verify_invariance(b, metric, x) < 1e-12);

  const auto id = build_boost(metric, x, 0.0, 2);
  CHECK(verify_invariance(id, metric, x) == 0.0);

  auto perturbed = b;
  perturbed.entries(0, 1) += 1e-3;
  const auto G = local_metric(b.g00, 2);
  const double oracle = (perturbed.entries.transpose() * G * perturbed.entries - G).cwiseAbs().maxCoeff();
  CHECK(verify_invariance(perturbed, metric, x) == oracle);
  CHECK(verify_invariance(perturbed, metric, x) >= 1e-4);
}

TEST_CASE("boosts are local to their anchor") {
  const auto metric = test::hooke(1, 1, 2);
  const auto b = build_boost(metric, vec({0.5}), 0.3, 2);
  Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1> interval(2);
  interval << 1.0, 0.2;
  CHECK_NOTHROW(apply_boost(b, interval, vec({0.5})));
  try {
    apply_boost(b, interval, vec({0.6}));
    FAIL("expected an anchor mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AnchorMismatch);
  }
  CHECK_THROWS_AS(verify_invariance(b, metric, vec({0.6})), Error);
}

TEST_CASE("boosted intervals keep their length") {
  const auto metric = test::kepler(1, 1, 1);
  const Vectord x = vec({5.0});
  const auto b = build_boost(metric, x, 0.5, 2);
  Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1> interval(2);
  interval << 0.3, 0.1;
  const auto out = apply_boost(b, interval, x);
  const double g00 = metric_g00(metric, x);
  CHECK(g00 * out[0] * out[0] - out[1] * out[1] ==
        doctest::Approx(g00 * interval[0] * interval[0] - interval[1] * interval[1]).epsilon(1e-13));
}

TEST_CASE("time dilation reference values") {
  CHECK(time_dilation(uniform_metric(1.0), vec({0}), 0.0) == 1.0);
  CHECK(time_dilation(uniform_metric(1.0), vec({0}), 0.6) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(time_dilation(uniform_metric(0.5), vec({0}), 0.5) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(time_dilation(uniform_metric(0.5), vec({0}), 0.8), Error);
}

TEST_CASE("length contraction reference values") {
  CHECK(length_contraction(uniform_metric(1.0), vec({0}), 0.0, 1.0) == 1.0);
  CHECK(length_contraction(uniform_metric(1.0), vec({0}), 0.6, 1.0) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(length_contraction(uniform_metric(0.5), vec({0}), 0.5, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(length_contraction(uniform_metric(1.0), vec({0}), 0.5, 0.0), Error);
}

TEST_CASE("redshift reference values") {
  const auto far = redshift(std::numeric_limits<double>::infinity(), 1.0, 1.0);
  CHECK(far.nu == 1.0);
  CHECK(far.delta_nu == 0.0);
  CHECK(redshift(4.0, 1.0, 1.0).nu == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  const auto weak = redshift(1000.0, 1.0, 1.0);
  CHECK(weak.delta_nu == doctest::Approx(-0.001).epsilon(1e-2));
  CHECK(std::abs(weak.delta_nu - weak_field_redshift(1000.0, 1.0, 1.0)) < 1e-6);
  CHECK(weak.delta_nu <= 0);
  try {
    redshift(2.0, 1.0, 1.0);
    FAIL("expected a horizon error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Horizon);
  }
}

TEST_CASE("redshift difference is accurate deep in the weak field") {
  // sqrt(1-u) - 1 = -u/2 - u^2/8 - ...
  const double r = 1e12;
  const double u = 2 / r;
  CHECK(redshift(r, 1.0, 1.0).delta_nu == doctest::Approx(-u / 2 - u * u / 8).epsilon(1e-14));
}

TEST_CASE("redshift ratio reference values") {
  CHECK(redshift_ratio(7.0, 7.0, 1.0) == 1.0);
  CHECK(redshift_ratio(4.0, std::numeric_limits<double>::infinity(), 1.0) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(redshift_ratio(4.0, 8.0, 1.0) == doctest::Approx(std::sqrt(0.5 / 0.75)).epsilon(1e-15));
  CHECK_THROWS_AS(redshift_ratio(4.0, 1.5, 1.0), Error);
}

TEST_CASE("random boosts preserve the metric and have unit determinant") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> g(1e-3, 2.0), u(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    const double g00 = g(rng);
    const double beta = 0.999 * std::sqrt(g00) * u(rng);
    const auto b = build_boost(g00, beta, i % 2 ? 4 : 2);
    const double scale = b.entries.cwiseAbs().maxCoeff();
    CHECK(verify_invariance(b) < 1e-12 * scale * scale);
    CHECK(std::abs(b.entries.determinant() - 1) < 1e-12 * scale * scale);
    CHECK(std::abs(b.entries(0, 0) - b.entries(1, 1)) < 1e-12 * scale);
    CHECK(std::abs(b.entries(1, 0) - g00 * b.entries(0, 1)) < 1e-12 * scale);
  }
}

TEST_CASE("boost factor equals the particle Gamma") {
  std::mt19937_64 rng(19);
  const auto metric = test::hooke(1.0, 1, 1.0);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 200; ++i) {
    const Vectord x = vec({0.8 * u(rng)});
    const double beta = 0.99 * u(rng);
    const auto b = build_boost(metric, x, beta, 2);
    const ParticleStated s{0, x, vec({beta})};
    CHECK(test::rel_diff(b.gamma, metric_gamma(s, metric)) < 1e-12);
  }
}

TEST_CASE("opposite boosts compose to the identity") {
  for (double g00 : {0.3, 1.0, 1.7})
    for (double beta : {0.1, 0.5}) {
      const auto forward = build_boost(g00, beta, 4);
      const auto back = build_boost(g00, -beta, 4);
      CHECK((forward.entries * back.entries - BoostEntries<double>::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("dilation times contraction of a unit length is one") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> g(0.05, 2.0), u(-1, 1);
  for (int i = 0; i < 200; ++i) {
    const auto metric = uniform_metric(g(rng));
    const double beta = 0.99 * std::sqrt(metric_g00(metric, vec({0}))) * u(rng);
    CHECK(std::abs(time_dilation(metric, vec({0}), beta) * length_contraction(metric, vec({0}), beta, 1.0) - 1) <
          1e-12);
  }
}

TEST_CASE("frequency increases with radius outside the horizon") {
  double previous = 0;
  for (double r = 2.0001; r < 1e6; r *= 1.1) {
    const double nu = redshift(r, 1.0, 1.0).nu;
    CHECK(nu > previous);
    previous = nu;
  }
}

TEST_CASE("long double instantiation") {
  using LD = long double;
  const auto b = build_boost<LD>(0.5L, 0.5L, 2);
  CHECK(std::abs(b.gamma - 2.0L) < 1e-17L);
  CHECK(verify_invariance(b) < 1e-17L);
}

}
