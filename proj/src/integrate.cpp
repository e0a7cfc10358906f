#include "relmech/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relmech/error.hpp"

namespace relmech {

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::RK4: return "rk4";
    case Method::RKF45: return "rkf45";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "rk4") return Method::RK4;
  if (name == "rkf45") return Method::RKF45;
  fail(ErrorKind::Config, "unknown integration method '" + std::string(name) + "' (expected rk4 or rkf45)");
}

std::string_view to_string(Termination termination) noexcept {
  switch (termination) {
    case Termination::Completed: return "completed";
    case Termination::GuardTripped: return "guard-tripped";
    case Termination::MaxSteps: return "max-steps";
  }
  return "unknown";
}

void IntegratorSpec::validate() const {
  if (!(step > 0)) fail(ErrorKind::InvalidArgument, "integrator step must be > 0");
  if (!(rtol > 0)) fail(ErrorKind::InvalidArgument, "integrator rtol must be > 0");
  if (!(atol > 0)) fail(ErrorKind::InvalidArgument, "integrator atol must be > 0");
  if (max_steps == 0) fail(ErrorKind::InvalidArgument, "integrator max_steps must be > 0");
}

std::vector<double> uniform_times(double t0, double t1, std::size_t n) {
  std::vector<double> times(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    times[i] = i == n ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n);
  return times;
}

namespace {

// Fehlberg 4(5) tableau.
constexpr double a21 = 1.0 / 4.0;
constexpr double a31 = 3.0 / 32.0, a32 = 9.0 / 32.0;
constexpr double a41 = 1932.0 / 2197.0, a42 = -7200.0 / 2197.0, a43 = 7296.0 / 2197.0;
constexpr double a51 = 439.0 / 216.0, a52 = -8.0, a53 = 3680.0 / 513.0, a54 = -845.0 / 4104.0;
constexpr double a61 = -8.0 / 27.0, a62 = 2.0, a63 = -3544.0 / 2565.0, a64 = 1859.0 / 4104.0,
                 a65 = -11.0 / 40.0;
constexpr double c2 = 1.0 / 4.0, c3 = 3.0 / 8.0, c4 = 12.0 / 13.0, c5 = 1.0, c6 = 1.0 / 2.0;
// fifth-order weights
constexpr double b1 = 16.0 / 135.0, b3 = 6656.0 / 12825.0, b4 = 28561.0 / 56430.0, b5 = -9.0 / 50.0,
                 b6 = 2.0 / 55.0;
// fourth-order weights
constexpr double d1 = 25.0 / 216.0, d3 = 1408.0 / 2565.0, d4 = 2197.0 / 4104.0, d5 = -1.0 / 5.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

bool is_domain_error(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::SpeedLimitExceeded:
    case ErrorKind::InsideHorizon:
    case ErrorKind::SingularPoint:
      return true;
    default:
      return false;
  }
}

struct Trial {
  OdeState y;    // propagated state
  OdeState err;  // embedded error estimate (empty for RK4)
};

Trial rk4_step(const OdeRhs& f, double t, const OdeState& y, double h) {
  const OdeState k1 = f(t, y);
  const OdeState k2 = f(t + h / 2, y + (h / 2) * k1);
  const OdeState k3 = f(t + h / 2, y + (h / 2) * k2);
  const OdeState k4 = f(t + h, y + h * k3);
  return {y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4), {}};
}

// Advances with the fifth-order solution; the difference to the fourth-order
// one is the local error estimate.
Trial rkf45_step(const OdeRhs& f, double t, const OdeState& y, double h) {
  const OdeState k1 = f(t, y);
  const OdeState k2 = f(t + c2 * h, y + h * (a21 * k1));
  const OdeState k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
  const OdeState k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const OdeState k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const OdeState k6 = f(t + c6 * h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  OdeState y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  OdeState err = h * ((b1 - d1) * k1 + (b3 - d3) * k3 + (b4 - d4) * k4 + (b5 - d5) * k5 + b6 * k6);
  return {std::move(y5), std::move(err)};
}

double error_norm(const OdeState& err, const OdeState& y0, const OdeState& y1, double rtol, double atol) {
  double worst = 0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    worst = std::max(worst, std::abs(err[i]) / scale);
  }
  return worst;
}

class DriftTracker {
 public:
  explicit DriftTracker(const OdeMonitor& monitor) : monitor_(monitor) {}

  void observe(double t, const OdeState& y) {
    if (!monitor_) return;
    const Eigen::VectorXd q = monitor_(t, y);
    if (reference_.size() == 0) {
      reference_ = q;
      drift_ = Eigen::VectorXd::Zero(q.size());
      return;
    }
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      const double ref = reference_[i];
      const double scale = std::abs(ref) > std::numeric_limits<double>::min() ? std::abs(ref) : 1.0;
      const double d = std::abs(q[i] - ref) / scale;
      if (std::isfinite(d)) drift_[i] = std::max(drift_[i], d);
    }
  }

  Eigen::VectorXd drift() const { return drift_; }

 private:
  const OdeMonitor& monitor_;
  Eigen::VectorXd reference_;
  Eigen::VectorXd drift_;
};

}  // namespace

IntegrationReport integrate(const OdeRhs& rhs, const OdeState& y0, double t0, double t1,
                            const IntegratorSpec& spec, std::span<const double> sample_times,
                            const OdeMonitor& monitor) {
  spec.validate();
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0))
    fail(ErrorKind::InvalidArgument, "time span must be finite and increasing");
  for (std::size_t i = 1; i < sample_times.size(); ++i)
    if (!(sample_times[i] > sample_times[i - 1]))
      fail(ErrorKind::InvalidArgument, "sample times must be strictly increasing");

  IntegrationReport report;
  DriftTracker drift(monitor);

  auto check_guard = [&](double t, const OdeState& y) -> std::optional<std::string> {
    if (!y.allFinite()) return std::string("non-finite state");
    if (spec.guard) return spec.guard(t, y);
    return std::nullopt;
  };

  if (auto reason = check_guard(t0, y0)) {
    report.termination = Termination::GuardTripped;
    report.message = *reason;
    report.offending = OdeSample{t0, y0};
    return report;
  }

  // sample cursor: times <= t0 are recorded as the initial state
  std::size_t next_sample = 0;
  const bool record_all = sample_times.empty();
  auto record = [&](double t, const OdeState& y) {
    report.samples.push_back({t, y});
    drift.observe(t, y);
  };
  record(t0, y0);
  while (next_sample < sample_times.size() && sample_times[next_sample] <= t0) ++next_sample;

  double t = t0;
  OdeState y = y0;
  double h = std::min(spec.step, t1 - t0);
  const double eps = std::numeric_limits<double>::epsilon();

  while (t < t1) {
    if (report.steps >= spec.max_steps) {
      report.termination = Termination::MaxSteps;
      break;
    }
    // clamp onto the next sample time or the end of the span
    double target = t1;
    if (next_sample < sample_times.size()) target = std::min(target, sample_times[next_sample]);
    bool lands = false;
    double step = h;
    if (t + step >= target - 4 * eps * std::abs(target)) {
      step = target - t;
      lands = true;
    }

    Trial trial;
    std::optional<std::string> domain_failure;
    try {
      trial = spec.method == Method::RK4 ? rk4_step(rhs, t, y, step) : rkf45_step(rhs, t, y, step);
    } catch (const Error& e) {
      if (!is_domain_error(e)) throw;
      domain_failure = e.what();
    }

    if (spec.method == Method::RKF45) {
      double factor = kMinFactor;
      bool accept = false;
      if (!domain_failure) {
        const double err = error_norm(trial.err, y, trial.y, spec.rtol, spec.atol);
        if (!std::isfinite(err)) {
          domain_failure = "non-finite error estimate";
        } else {
          accept = err <= 1.0;
          factor = err == 0 ? kMaxFactor : std::clamp(kSafety * std::pow(err, -0.2), kMinFactor, kMaxFactor);
        }
      }
      if (!accept) {
        ++report.rejected;
        h = step * factor;
        if (h < 16 * eps * std::max(1.0, std::abs(t))) {
          if (domain_failure) {
            // the flow cannot be continued inside the admissible region
            report.termination = Termination::GuardTripped;
            report.message = *domain_failure;
            report.offending = OdeSample{t, y};
            break;
          }
          fail(ErrorKind::Stiffness, "step size underflow at t = " + std::to_string(t));
        }
        continue;
      }
      if (!lands) h = step * factor;
      else h = std::max(h, step * factor);
    } else if (domain_failure) {
      report.termination = Termination::GuardTripped;
      report.message = *domain_failure;
      report.offending = OdeSample{t, y};
      break;
    }

    const double t_new = lands ? target : t + step;
    if (auto reason = check_guard(t_new, trial.y)) {
      report.termination = Termination::GuardTripped;
      report.message = *reason;
      report.offending = OdeSample{t_new, trial.y};
      ++report.steps;
      break;
    }
    t = t_new;
    y = std::move(trial.y);
    ++report.steps;

    const bool at_sample = next_sample < sample_times.size() && lands && t == sample_times[next_sample];
    if (at_sample) ++next_sample;
    if (record_all || at_sample || (t >= t1 && report.samples.back().t < t1 &&
                                    (sample_times.empty() || sample_times.back() >= t1)))
      record(t, y);
    if (spec.method == Method::RK4) h = spec.step;
  }

  report.max_drift = drift.drift();
  return report;
}

}  // namespace relmech
