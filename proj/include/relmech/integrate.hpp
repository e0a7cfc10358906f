#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relmech {

using OdeState = Eigen::VectorXd;
using OdeRhs = std::function<OdeState(double, const OdeState&)>;
/// Returns a reason when the state must not be accepted.
using OdeGuard = std::function<std::optional<std::string>(double, const OdeState&)>;
/// Quantities monitored for drift at every sample.
using OdeMonitor = std::function<Eigen::VectorXd(double, const OdeState&)>;

enum class Method { RK4, RKF45 };

std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view name);

struct IntegratorSpec {
  Method method = Method::RKF45;
  double step = 1e-3;  // fixed step for RK4, initial step for RKF45
  double rtol = 1e-8;
  double atol = 1e-10;
  std::size_t max_steps = 50'000'000;
  OdeGuard guard;

  void validate() const;
};

enum class Termination { Completed, GuardTripped, MaxSteps };

std::string_view to_string(Termination termination) noexcept;

struct OdeSample {
  double t;
  OdeState y;
};

struct IntegrationReport {
  std::vector<OdeSample> samples;
  std::size_t steps = 0;
  std::size_t rejected = 0;
  Termination termination = Termination::Completed;
  std::string message;                 // guard reason when tripped
  std::optional<OdeSample> offending;  // state that tripped the guard
  Eigen::VectorXd max_drift;           // max |q - q0| / max(|q0|, tiny) per monitored quantity

  bool completed() const { return termination == Termination::Completed; }
};

/// Integrates dy/dt = rhs(t, y) over [t0, t1]. Steps are shortened to land
/// exactly on every requested sample time; with no sample times every
/// accepted step is recorded. The guard is evaluated on every accepted state;
/// domain errors thrown by rhs inside a trial step shrink the step (RKF45)
/// and trip the guard if they persist.
///
/// Throws Error{Stiffness} on step-size underflow.
IntegrationReport integrate(const OdeRhs& rhs, const OdeState& y0, double t0, double t1,
                            const IntegratorSpec& spec, std::span<const double> sample_times = {},
                            const OdeMonitor& monitor = {});

/// n+1 evenly spaced times covering [t0, t1].
std::vector<double> uniform_times(double t0, double t1, std::size_t n);

}  // namespace relmech
