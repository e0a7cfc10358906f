#include "relmech/lienard.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "relmech/error.hpp"

namespace relmech {

void LienardSystem::validate() const {
  if (!f || !g) fail(ErrorKind::InvalidArgument, "Lienard system needs both f and g");
  if (!(c > 0)) fail(ErrorKind::InvalidArgument, "speed of light c must be > 0");
  if (!(m > 0)) fail(ErrorKind::InvalidArgument, "mass m must be > 0");
}

LienardSystem damped_oscillator(double kappa, double alpha, double c, double m) {
  LienardSystem s{[kappa](double) { return kappa; }, [](double x) { return x; }, alpha, c, m,
                  std::to_string(kappa), "x"};
  s.validate();
  return s;
}

double lienard_rhs(const LienardSystem& system, double x, double xdot) {
  const double beta2 = xdot * xdot / (system.c * system.c);
  if (!(beta2 < 1))
    fail(ErrorKind::SpeedLimitExceeded, "|xdot| = " + std::to_string(std::abs(xdot)) + " >= c");
  const double gamma = 1 / std::sqrt(1 - beta2);
  return -(gamma * system.f(x) * xdot + system.g(x)) / (gamma * gamma * gamma);
}

std::vector<double> chiellini_alpha(double kappa) {
  if (kappa == 0 || !std::isfinite(kappa)) fail(ErrorKind::InvalidArgument, "kappa must be finite and nonzero");
  const double disc = 1 - 4 / (kappa * kappa);
  if (disc < 0)
    fail(ErrorKind::NoRealAlpha, "alpha(1+alpha) = -1/kappa^2 has no real root for kappa^2 < 4, kappa = " +
                                     std::to_string(kappa));
  if (disc == 0) return {-0.5};
  const double root = std::sqrt(disc);
  return {(-1 - root) / 2, (-1 + root) / 2};
}

namespace {

double g_over_f(const LienardSystem& s, double x) {
  const double f = s.f(x);
  if (f == 0) fail(ErrorKind::IntegratingFactor, "f vanishes at x = " + std::to_string(x));
  return s.g(x) / f;
}

// fourth-order central difference
double derivative(const std::function<double(double)>& fn, double x) {
  const double h = 1e-3 * std::max(1.0, std::abs(x));
  return (8 * (fn(x + h) - fn(x - h)) - (fn(x + 2 * h) - fn(x - 2 * h))) / (12 * h);
}

}  // namespace

double chiellini_mismatch(const LienardSystem& system, double lo, double hi, std::size_t n) {
  system.validate();
  if (!(hi >= lo) || n < 2) fail(ErrorKind::InvalidArgument, "probe interval needs hi >= lo and n >= 2");
  auto ratio = [&](double x) { return g_over_f(system, x); };
  double worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    worst = std::max(worst, std::abs(derivative(ratio, x) + system.chiellini_factor() * system.f(x)));
  }
  return worst;
}

double first_integral_value(const LienardSystem& system, double x, double xdot, double omega) {
  const double a = system.chiellini_factor();
  if (a == 0) fail(ErrorKind::DegenerateParameter, "alpha(1+alpha) = 0");
  const double beta2 = xdot * xdot / (system.c * system.c);
  if (!(beta2 < 1)) fail(ErrorKind::SpeedLimitExceeded, "|xdot| >= c");
  const double gx = 1 / std::sqrt(1 - beta2) * xdot;  // gamma xdot = x'
  const double q = g_over_f(system, x);
  return std::exp(omega) * (gx * gx - q * (gx + q) / a);
}

void first_integral(const LienardSystem& system, std::vector<LienardSample>& samples) {
  system.validate();
  if (samples.empty()) return;
  double sign = 0;
  double omega = 0;
  double previous_rate = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto& s = samples[i];
    const double f = system.f(s.x);
    const double fsign = (f > 0) - (f < 0);
    if (fsign == 0 || (sign != 0 && fsign != sign))
      fail(ErrorKind::IntegratingFactor, "f crosses zero along the trajectory near x = " + std::to_string(s.x));
    sign = fsign;
    const double rate = s.gamma * f;
    if (i) omega += (s.tau - samples[i - 1].tau) * (rate + previous_rate) / 2;
    previous_rate = rate;
    s.omega = omega;
    const double q = system.g(s.x) / f;
    s.first_integral = std::exp(omega) * (s.xprime * s.xprime - q * (s.xprime + q) / system.chiellini_factor());
  }
}

LienardRun integrate_lienard(const LienardSystem& system, double x0, double xdot0, double span,
                             std::size_t n_samples, const IntegratorSpec& spec) {
  system.validate();
  if (system.chiellini_factor() == 0) fail(ErrorKind::DegenerateParameter, "alpha(1+alpha) = 0");
  if (!(std::abs(xdot0) < system.c))
    fail(ErrorKind::SpeedLimitExceeded, "initial |xdot| = " + std::to_string(std::abs(xdot0)) + " >= c");
  if (n_samples == 0) fail(ErrorKind::InvalidArgument, "need at least one sample interval");

  const double c = system.c;
  auto gamma_of = [c](double xprime) { return std::sqrt(1 + xprime * xprime / (c * c)); };
  auto rhs = [&system, gamma_of](double, const OdeState& y) {
    const double gamma = gamma_of(y[1]);
    OdeState d(3);
    d << y[1], -gamma * (system.f(y[0]) * y[1] + system.g(y[0])), gamma;
    return d;
  };

  OdeState y0(3);
  y0 << x0, xdot0 / std::sqrt(1 - xdot0 * xdot0 / (c * c)), 0;
  const auto times = uniform_times(0, span, n_samples);

  LienardRun run;
  run.report = integrate(rhs, y0, 0, span, spec, times);
  run.samples.reserve(run.report.samples.size());
  for (const auto& s : run.report.samples) {
    const double gamma = gamma_of(s.y[1]);
    run.samples.push_back({s.t, s.y[2], s.y[0], s.y[1] / gamma, s.y[1], gamma});
  }
  first_integral(system, run.samples);

  const double i0 = run.samples.front().first_integral;
  for (const auto& s : run.samples) {
    const double d = i0 != 0 ? std::abs(s.first_integral - i0) / std::abs(i0) : std::abs(s.first_integral);
    run.max_drift = std::max(run.max_drift, d);
  }
  return run;
}

double DampedMetric::potential(double x) const {
  const double q = g_over_f(x);
  return -m * q * q / (2 * chiellini_factor);
}

double DampedMetric::g00(double x) const {
  const double q = g_over_f(x);
  return 1 - q * q / (c * c * chiellini_factor);
}

double DampedMetric::line_element(double x, double dt, double dx, double omega) const {
  return std::exp(omega) * (c * c * g00(x) * dt * dt - dx * dx);
}

double DampedMetric::effective_lagrangian(double x, double xdot, double omega) const {
  return m / 2 * std::exp(omega) * (xdot * xdot - c * c * g00(x));
}

DampedMetric damped_metric(const LienardSystem& system) {
  system.validate();
  const double a = system.chiellini_factor();
  if (a == 0) fail(ErrorKind::DegenerateParameter, "alpha(1+alpha) = 0: alpha must differ from 0 and -1");
  return {a, system.m, system.c, [system](double x) { return relmech::g_over_f(system, x); }};
}

EinsteinCheck einstein_consistency(const DampedMetric& metric, const std::vector<LienardSample>& samples) {
  double worst = 0;
  for (const auto& s : samples) worst = std::max(worst, std::abs(std::exp(-2 * s.omega) - metric.g00(s.x)));
  return {worst, worst < 1e-6};
}

void write_csv(std::ostream& os, const std::vector<LienardSample>& samples) {
  os << "proper_time[time],t[time],x[length],xdot[length/time],xprime[length/time],gamma[1],omega[1],"
        "I[length^2/time^2]\n";
  const auto old_precision = os.precision(17);
  for (const auto& s : samples)
    os << s.tau << ',' << s.t << ',' << s.x << ',' << s.xdot << ',' << s.xprime << ',' << s.gamma << ','
       << s.omega << ',' << s.first_integral << '\n';
  os.precision(old_precision);
}

}  // namespace relmech
