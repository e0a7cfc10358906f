#include "support.hpp"

#include <numbers>

#include "relmech/duality.hpp"
#include "relmech/trajectory.hpp"

using namespace relmech;
using relmech::test::vec;

namespace {

constexpr double kPi = std::numbers::pi;

IntegratorSpec tight() {
  IntegratorSpec spec;
  spec.rtol = 1e-12;
  spec.atol = 1e-14;
  return spec;
}

// z = a cos t + i b sin t sampled exactly, the low-velocity oscillator with m = k = 1.
std::vector<PlanarState> analytic_ellipse(double a, double b, double span, std::size_t n) {
  std::vector<PlanarState> out;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = span * static_cast<double>(i) / static_cast<double>(n);
    out.push_back({t, {a * std::cos(t), b * std::sin(t)}, {-a * std::sin(t), b * std::cos(t)}});
  }
  return out;
}

}  // namespace

TEST_SUITE("duality") {

TEST_CASE("Bohlin map reference values") {
  CHECK(bohlin_map({1, 1}, {0, 0}, 1, 1).xi == Complex(0, 2));
  const auto circ = bohlin_map({1, 0}, {0, 1}, 1, 1);
  CHECK(circ.xi == Complex(1, 0));
  CHECK(std::abs(circ.xi_prime - Complex(0, 2)) < 1e-15);
  CHECK(circ.kappa == 4.0);
  const auto folded = bohlin_map({-3, 0}, {0, 0}, 1, 1);
  CHECK(folded.xi.real() == 9.0);
  CHECK(folded.xi.imag() == 0.0);
}

TEST_CASE("Bohlin map is branched at the origin") {
  try {
    bohlin_map({0, 0}, {1, 0}, 1, 1);
    FAIL("expected a branch-point error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BranchPoint);
  }
}

TEST_CASE("z and -z map to the same point") {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> n;
  for (int i = 0; i < 100; ++i) {
    const Complex z{n(rng), n(rng)}, w{n(rng), n(rng)};
    const auto a = bohlin_map(z, w, 1.0, 1.0);
    const auto b = bohlin_map(-z, -w, 1.0, 1.0);
    CHECK(a.xi == b.xi);
    CHECK(a.xi_prime == b.xi_prime);
  }
}

TEST_CASE("planar central forces reference values") {
  const auto hooke = central_system_rhs(CentralKind::Hooke, LagrangianRegime::SemiRelativistic, vec({1, 0}),
                                        vec({0, 0}), {});
  CHECK(hooke.du[0] == -1.0);
  CHECK(hooke.du[1] == 0.0);
  const auto kepler = central_system_rhs(CentralKind::Kepler, LagrangianRegime::SemiRelativistic, vec({2, 0}),
                                         vec({0, 0}), {});
  CHECK(kepler.du[0] == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(kepler.du[1] == 0.0);
  CHECK_THROWS_AS(central_system_rhs(CentralKind::Kepler, LagrangianRegime::Relativistic, vec({2, 0, 0}),
                                     vec({0, 0, 0}), {}),
                  Error);
}

TEST_CASE("relativistic central forces are d/dt(gamma v) = -omega^2 gamma x and -GM gamma x / r^3") {
  const CentralParams params{2.0, 1.5, 1.0, 3.0};
  const Vectord x = vec({1.2, -0.4}), v = vec({0.5, 1.1});
  const double gamma = lorentz_gamma(v, params.c);
  for (auto kind : {CentralKind::Hooke, CentralKind::Kepler}) {
    const Vectord a = central_system_rhs(kind, LagrangianRegime::SemiRelativisticFull, x, v, params).du;
    const double c2 = params.c * params.c;
    const Vectord dp = gamma * a + gamma * gamma * gamma * v.dot(a) / c2 * v;  // d/dt(gamma v)
    const Vectord force = kind == CentralKind::Hooke ? Vectord(-params.k * gamma * x)
                                                     : Vectord(-params.gm * gamma * x / std::pow(x.norm(), 3));
    CHECK((dp - force).norm() < 1e-13 * force.norm());
  }
}

TEST_CASE("angular momentum on a semi-relativistic circular orbit") {
  const CentralParams params{1.0, 1.0, 1.0, 4.0};
  const auto metric = central_metric(CentralKind::Hooke, params);
  const auto sim = simulate_native(EomForm::SemiRelativisticLowV, metric, vec({1, 0}), vec({0, 1}), 20 * kPi, tight(),
                                   2000);
  REQUIRE(sim.report.completed());
  const auto& y0 = sim.report.samples.front().y;
  const double l0 = y0[0] * y0[3] - y0[1] * y0[2];
  for (const auto& s : sim.report.samples) {
    CHECK(std::abs(s.y.head(2).norm() - 1) < 1e-8);
    CHECK(std::abs(s.y[0] * s.y[3] - s.y[1] * s.y[2] - l0) < 1e-8);
  }
}

TEST_CASE("angular momentum drift over 50 periods in both relativistic central systems") {
  const CentralParams params{1.0, 1.0, 1.0, 5.0};
  struct Case {
    CentralKind kind;
    double period;
  };
  for (const auto& [kind, period] : {Case{CentralKind::Hooke, 2 * kPi}, Case{CentralKind::Kepler, 2 * kPi}}) {
    const auto metric = central_metric(kind, params);
    const ParticleStated initial{0, vec({1, 0}), vec({0, 0.8})};
    const auto sim = simulate(EomForm::RelativisticCoordTime, metric, initial, 50 * period, tight(), 5000);
    REQUIRE(sim.report.completed());
    CHECK(sim.report.max_drift[2] < 1e-6);
  }
}

TEST_CASE("semi-relativistic energy is conserved by the low-velocity flow") {
  const CentralParams params{1.0, 1.0, 1.0, 2.0};
  const auto osc = oscillator_trajectory(EomForm::SemiRelativisticLowV, params, {1, 0}, {0, 0.5}, 20 * kPi, 4000,
                                         tight());
  const double h0 = oscillator_energy(osc.front(), 1, 1);
  for (const auto& s : osc) CHECK(std::abs(oscillator_energy(s, 1, 1) - h0) < 1e-6 * h0);
}

TEST_CASE("exact circular data satisfies the Kepler equation") {
  const auto report = verify_duality(analytic_ellipse(1, 1, 2 * kPi, 20000), 1, 1);
  CHECK(report.kappa == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(report.h_drift < 1e-15);
  CHECK(report.max_residual < 1e-8);
  for (const auto& s : report.kepler) CHECK(std::abs(std::abs(s.xi) - 1) < 1e-12);
}

TEST_CASE("integrated circular and elliptical oscillators map onto Kepler orbits") {
  const CentralParams params{1.0, 1.0, 1.0, 1.0};
  const std::size_t n = 12566;
  const auto circle = oscillator_trajectory(EomForm::SemiRelativisticLowV, params, {1, 0}, {0, 1}, 4 * kPi, n, tight());
  CHECK(verify_duality(circle, 1, 1).max_residual < 1e-6);

  const auto ellipse =
      oscillator_trajectory(EomForm::SemiRelativisticLowV, params, {1, 0}, {0, 0.5}, 4 * kPi, n, tight());
  const auto report = verify_duality(ellipse, 1, 1);
  CHECK(report.max_residual < 1e-5);
  CHECK(report.kappa == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(report.kepler.size() > 100);
}

TEST_CASE("the fully relativistic oscillator does not map onto a Kepler orbit") {
  const CentralParams params{1.0, 1.0, 1.0, 5.0};
  const std::size_t n = 12566;
  const auto semi = oscillator_trajectory(EomForm::SemiRelativisticLowV, params, {1, 0}, {0, 0.5}, 4 * kPi, n, tight());
  const auto full = oscillator_trajectory(EomForm::RelativisticProperTime, params, {1, 0}, {0, 0.5}, 4 * kPi, n,
                                          tight());
  DualityOptions relaxed;
  relaxed.h_drift_tolerance = 1.0;
  const double semi_residual = verify_duality(semi, 1, 1).max_residual;
  const double full_residual = verify_duality(full, 1, 1, relaxed).max_residual;
  CHECK(full_residual > 10 * semi_residual);
}

TEST_CASE("verify_duality input errors") {
  SUBCASE("orbit through the origin") {
    auto radial = analytic_ellipse(1, 0, 2 * kPi, 8);
    try {
      verify_duality(radial, 1, 1);
      FAIL("expected a branch-point error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::BranchPoint);
    }
  }
  SUBCASE("energy drift") {
    auto orbit = analytic_ellipse(1, 1, 2 * kPi, 100);
    orbit.back().w *= 1.01;
    try {
      verify_duality(orbit, 1, 1);
      FAIL("expected an invalid-input error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidInput);
    }
  }
  SUBCASE("too short") { CHECK_THROWS_AS(verify_duality(analytic_ellipse(1, 1, 1, 0), 1, 1), Error); }
}

TEST_CASE("second-difference stencil is exact on low-order polynomials") {
  std::vector<Complex> samples;
  const double h = 0.1;
  for (int i = -4; i <= 4; ++i) {
    const double t = 0.3 + i * h;
    samples.push_back({t * t * t * t, 2 * t * t});
  }
  const Complex d2 = central_second_derivative(samples.data() + 4, h);
  CHECK(std::abs(d2 - Complex(12 * 0.09, 4)) < 1e-10);
}

}
