#include "support.hpp"

#include <numbers>

#include "relmech/integrate.hpp"
#include "relmech/trajectory.hpp"

using namespace relmech;
using relmech::test::vec;

namespace {

OdeState make(std::initializer_list<double> values) {
  OdeState y(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) y[i++] = v;
  return y;
}

const OdeRhs decay = [](double, const OdeState& y) -> OdeState { return -y; };
const OdeRhs oscillator = [](double, const OdeState& y) -> OdeState { return make({y[1], -y[0]}); };

double oscillator_error(Method method, double step) {
  IntegratorSpec spec;
  spec.method = method;
  spec.step = step;
  const auto report = integrate(oscillator, make({1, 0}), 0, 2 * std::numbers::pi, spec);
  const auto& end = report.samples.back();
  REQUIRE(end.t == 2 * std::numbers::pi);
  return std::hypot(end.y[0] - 1, end.y[1]);
}

}  // namespace

TEST_SUITE("integrate") {

TEST_CASE("exponential decay") {
  IntegratorSpec spec;
  spec.rtol = 1e-10;
  spec.atol = 1e-12;
  const double t = 1.0;
  const auto report = integrate(decay, make({1}), 0, 1, spec, std::span<const double>(&t, 1));
  REQUIRE(report.completed());
  CHECK(report.samples.back().t == 1.0);
  CHECK(std::abs(report.samples.back().y[0] - std::exp(-1.0)) < 1e-8);
}

TEST_CASE("harmonic oscillator returns after one period") {
  IntegratorSpec spec;
  spec.rtol = 1e-10;
  spec.atol = 1e-12;
  const auto report = integrate(oscillator, make({1, 0}), 0, 2 * std::numbers::pi, spec);
  REQUIRE(report.completed());
  const auto& end = report.samples.back().y;
  CHECK(std::abs(end[0] - 1) < 1e-6);
  CHECK(std::abs(end[1]) < 1e-6);
  CHECK(oscillator_error(Method::RK4, 1e-3) < 1e-6);
}

TEST_CASE("free relativistic particle keeps its velocity") {
  const auto metric = test::flat(3, 1.0);
  const ParticleStated initial{0, vec({0.1, 0.2, 0.3}), vec({0.5, -0.6, 0.2})};
  for (auto form : {EomForm::RelativisticCoordTime, EomForm::RelativisticProperTime, EomForm::HamiltonianExact}) {
    const auto sim = simulate(form, metric, initial, 10.0, {}, 50);
    REQUIRE(sim.report.completed());
    for (const auto& row : sim.trajectory.rows) CHECK((row.v - initial.v).cwiseAbs().maxCoeff() < 4e-16);
  }
}

TEST_CASE("RK4 is fourth order") {
  double previous = 0;
  for (double h : {0.1, 0.05, 0.025, 0.0125}) {
    const double err = oscillator_error(Method::RK4, h);
    if (previous > 0) CHECK(previous / err >= 12.0);
    previous = err;
  }
}

TEST_CASE("RKF45 meets the requested tolerance") {
  for (double rtol : {1e-6, 1e-8, 1e-10}) {
    IntegratorSpec spec;
    spec.rtol = rtol;
    spec.atol = rtol * 1e-3;
    const auto times = uniform_times(0, 1, 20);
    const auto report = integrate(decay, make({1}), 0, 1, spec, times);
    REQUIRE(report.completed());
    for (const auto& s : report.samples) CHECK(std::abs(s.y[0] - std::exp(-s.t)) <= rtol * std::exp(-s.t));
  }
}

TEST_CASE("samples land exactly on requested times") {
  const auto times = uniform_times(0, 3, 7);
  CHECK(times.size() == 8);
  CHECK(times.front() == 0.0);
  CHECK(times.back() == 3.0);
  for (auto method : {Method::RK4, Method::RKF45}) {
    IntegratorSpec spec;
    spec.method = method;
    spec.step = 0.01;
    const auto report = integrate(oscillator, make({1, 0}), 0, 3, spec, times);
    REQUIRE(report.samples.size() == times.size());
    for (std::size_t i = 0; i < times.size(); ++i) CHECK(report.samples[i].t == times[i]);
  }
}

TEST_CASE("Hooke run at the speed limit trips the guard") {
  // c = k = m = 1, x = 1: the local limit is sqrt(g00) = sqrt(2)
  const auto metric = test::hooke(1, 1, 1);
  const ParticleStated initial{0, vec({1}), vec({-(std::sqrt(2.0) - 1e-6)})};
  REQUIRE(is_admissible(initial, metric));
  const auto sim = simulate(EomForm::Classical, metric, initial, 5.0, {}, 100);
  CHECK(sim.report.termination == Termination::GuardTripped);
  CHECK(sim.report.message.find("speed limit") != std::string::npos);
  REQUIRE(sim.report.offending.has_value());
  CHECK(sim.report.offending->y.allFinite());
  for (const auto& row : sim.trajectory.rows) {
    CHECK(std::isfinite(row.gamma));
    CHECK(row.x.allFinite());
  }
}

TEST_CASE("guard on the initial state") {
  IntegratorSpec spec;
  spec.guard = [](double, const OdeState& y) -> std::optional<std::string> {
    if (y[0] > 0.5) return std::string("too large");
    return std::nullopt;
  };
  const auto report = integrate(decay, make({1}), 0, 1, spec);
  CHECK(report.termination == Termination::GuardTripped);
  CHECK(report.samples.empty());
  CHECK(report.offending->t == 0.0);
}

TEST_CASE("guard trips once the flow leaves the allowed region") {
  IntegratorSpec spec;
  spec.guard = [](double, const OdeState& y) -> std::optional<std::string> {
    if (y[0] < 0.5) return std::string("below one half");
    return std::nullopt;
  };
  const auto report = integrate(decay, make({1}), 0, 5, spec);
  CHECK(report.termination == Termination::GuardTripped);
  CHECK(report.offending->y[0] < 0.5);
  CHECK(report.samples.back().y[0] >= 0.5);
  CHECK(report.samples.back().t < std::log(2.0));
}

TEST_CASE("step budget") {
  IntegratorSpec spec;
  spec.method = Method::RK4;
  spec.step = 1e-3;
  spec.max_steps = 10;
  const auto report = integrate(decay, make({1}), 0, 1, spec);
  CHECK(report.termination == Termination::MaxSteps);
  CHECK(report.steps == 10);
}

TEST_CASE("finite-time blow-up stops before the state overflows") {
  const OdeRhs blowup = [](double, const OdeState& y) -> OdeState { return y.cwiseProduct(y); };
  const auto report = integrate(blowup, make({1}), 0, 2, {});
  CHECK(report.termination == Termination::GuardTripped);
  CHECK(report.samples.back().t < 1.0);
  for (const auto& s : report.samples) CHECK(s.y.allFinite());
}

TEST_CASE("step underflow on a stiff problem is a stiffness error") {
  const OdeRhs stiff = [](double t, const OdeState& y) -> OdeState { return -1e20 * (y.array() - std::cos(t)).matrix(); };
  try {
    integrate(stiff, make({0}), 0, 1, {});
    FAIL("expected a stiffness error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Stiffness);
  }
}

TEST_CASE("spec validation") {
  IntegratorSpec spec;
  spec.rtol = 0;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = {};
  spec.step = -1;
  CHECK_THROWS_AS(integrate(decay, make({1}), 0, 1, spec), Error);
  CHECK_THROWS_AS(integrate(decay, make({1}), 1, 0, {}), Error);
  CHECK(parse_method("rk4") == Method::RK4);
  CHECK(parse_method("rkf45") == Method::RKF45);
  CHECK_THROWS_AS(parse_method("euler"), Error);
}

TEST_CASE("drift is monitored and non-negative") {
  const OdeMonitor energy = [](double, const OdeState& y) {
    Eigen::VectorXd q(1);
    q << y.squaredNorm() / 2;
    return q;
  };
  IntegratorSpec spec;
  spec.rtol = 1e-9;
  const auto report = integrate(oscillator, make({1, 0}), 0, 20, spec, {}, energy);
  REQUIRE(report.max_drift.size() == 1);
  CHECK(report.max_drift[0] >= 0);
  CHECK(report.max_drift[0] < 1e-7);
  CHECK(report.rejected <= report.steps);
}

TEST_CASE("runs are bitwise reproducible") {
  const auto metric = test::kepler(1, 2, 5.0);
  const ParticleStated initial{0, vec({1, 0}), vec({0, 1.1})};
  const auto a = simulate(EomForm::RelativisticCoordTime, metric, initial, 20.0, {}, 400);
  const auto b = simulate(EomForm::RelativisticCoordTime, metric, initial, 20.0, {}, 400);
  REQUIRE(a.report.samples.size() == b.report.samples.size());
  for (std::size_t i = 0; i < a.report.samples.size(); ++i) CHECK(a.report.samples[i].y == b.report.samples[i].y);
  CHECK(a.report.steps == b.report.steps);
}

}
