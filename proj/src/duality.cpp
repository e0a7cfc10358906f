#include "relmech/duality.hpp"

#include <algorithm>
#include <cmath>

#include "relmech/trajectory.hpp"

namespace relmech {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// 8th-order central stencils, taps at offsets 0..4
constexpr double kSecond[5] = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
constexpr double kFirst[5] = {0.0, 4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
constexpr int kHalfWidth = 4;

Complex central_first_derivative(const Complex* centre, double h) {
  Complex sum = 0;
  for (int i = 1; i <= kHalfWidth; ++i) sum += kFirst[i] * (centre[i] - centre[-i]);
  return sum / h;
}

struct Hermite {
  double t0, h;
  double p0, p1, d0, d1;  // values and derivatives at the ends (real part of the cubic)

  double value(double t) const {
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * p1 + (s3 - s2) * h * d1;
  }
  double derivative(double t) const {
    const double s = (t - t0) / h;
    const double s2 = s * s;
    return ((6 * s2 - 6 * s) * p0 + (3 * s2 - 4 * s + 1) * h * d0 + (-6 * s2 + 6 * s) * p1 + (3 * s2 - 2 * s) * h * d1) /
           h;
  }
};

Complex hermite_complex(double t0, double h, Complex p0, Complex p1, Complex d0, Complex d1, double t) {
  const Hermite re{t0, h, p0.real(), p1.real(), d0.real(), d1.real()};
  const Hermite im{t0, h, p0.imag(), p1.imag(), d0.imag(), d1.imag()};
  return {re.value(t), im.value(t)};
}

}  // namespace

EomForm central_form(LagrangianRegime regime) {
  switch (regime) {
    case LagrangianRegime::Relativistic: return EomForm::RelativisticCoordTime;
    case LagrangianRegime::SemiRelativisticFull: return EomForm::SemiRelativistic;
    case LagrangianRegime::SemiRelativistic: return EomForm::SemiRelativisticLowV;
    case LagrangianRegime::Effective:
    case LagrangianRegime::Classical: return EomForm::Classical;
  }
  fail(ErrorKind::InvalidArgument, "unknown Lagrangian regime");
}

StaticMetric<double> central_metric(CentralKind kind, const CentralParams& params) {
  const Constants<double> constants(params.c, params.m, 1.0);
  if (kind == CentralKind::Hooke) return {hooke_potential(params.k), constants, 2};
  return {kepler_potential(1.0, params.gm, params.m), constants, 2};
}

StateDerivative<double> central_system_rhs(CentralKind kind, LagrangianRegime regime, const Vectord& x,
                                           const Vectord& u, const CentralParams& params) {
  if (x.size() != 2 || u.size() != 2) fail(ErrorKind::InvalidArgument, "central systems are planar");
  return native_rhs(central_form(regime), x, u, central_metric(kind, params));
}

BohlinPoint bohlin_map(Complex z, Complex w, double h, double m) {
  if (!(std::abs(z) >= kBranchRadius))
    fail(ErrorKind::BranchPoint, "Bohlin map is branched at z = 0");
  if (!(m > 0)) fail(ErrorKind::InvalidArgument, "mass must be > 0");
  return {z * z, 2.0 * w / std::conj(z), 4 * h / m};
}

double oscillator_energy(const PlanarState& state, double m, double k) {
  return m * std::norm(state.w) / 2 + k * std::norm(state.z) / 2;
}

Complex central_second_derivative(const Complex* centre, double h) {
  Complex sum = kSecond[0] * centre[0];
  for (int i = 1; i <= kHalfWidth; ++i) sum += kSecond[i] * (centre[i] + centre[-i]);
  return sum / (h * h);
}

DualityReport verify_duality(const std::vector<PlanarState>& oscillator, double m, double k,
                             const DualityOptions& options) {
  if (oscillator.size() < 2) fail(ErrorKind::InvalidInput, "oscillator trajectory needs at least two samples");
  if (!(m > 0) || !(k > 0)) fail(ErrorKind::InvalidArgument, "m and k must be > 0");
  if (!(options.tau_step > 0)) fail(ErrorKind::InvalidArgument, "tau step must be > 0");

  DualityReport report;
  report.oscillator = oscillator;
  report.h_initial = oscillator_energy(oscillator.front(), m, k);
  if (!(report.h_initial > 0)) fail(ErrorKind::InvalidInput, "oscillator energy must be > 0 for a bound orbit");
  for (std::size_t i = 0; i < oscillator.size(); ++i) {
    const auto& s = oscillator[i];
    if (i && !(s.time > oscillator[i - 1].time))
      fail(ErrorKind::InvalidInput, "oscillator samples must be strictly increasing in time");
    if (!(std::abs(s.z) >= kBranchRadius))
      fail(ErrorKind::BranchPoint, "oscillator trajectory passes through z = 0 at t~ = " + std::to_string(s.time));
    const double drift = std::abs(oscillator_energy(s, m, k) - report.h_initial) / report.h_initial;
    report.h_drift = std::max(report.h_drift, drift);
  }
  if (report.h_drift > options.h_drift_tolerance)
    fail(ErrorKind::InvalidInput, "oscillator energy drifts by " + std::to_string(report.h_drift) +
                                      " (tolerance " + std::to_string(options.h_drift_tolerance) + ")");
  report.kappa = 4 * report.h_initial / m;

  // tau~(t~) = int |z|^2 dt~ by the endpoint-corrected trapezoid rule
  const std::size_t n = oscillator.size();
  std::vector<double> tau(n, 0.0), rate(n), rate_slope(n);
  for (std::size_t i = 0; i < n; ++i) {
    rate[i] = std::norm(oscillator[i].z);
    rate_slope[i] = 2 * (std::conj(oscillator[i].z) * oscillator[i].w).real();
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double h = oscillator[i].time - oscillator[i - 1].time;
    tau[i] = tau[i - 1] + h * (rate[i - 1] + rate[i]) / 2 + h * h * (rate_slope[i - 1] - rate_slope[i]) / 12;
  }

  // resample xi onto a uniform tau~ grid
  const double step = options.tau_step;
  const auto points = static_cast<std::size_t>(std::floor(tau.back() / step)) + 1;
  std::vector<Complex> xi(points);
  std::size_t seg = 0;
  for (std::size_t j = 0; j < points; ++j) {
    const double target = static_cast<double>(j) * step;
    while (seg + 2 < n && tau[seg + 1] < target) ++seg;
    const auto& a = oscillator[seg];
    const auto& b = oscillator[seg + 1];
    const double h = b.time - a.time;
    const Hermite clock{a.time, h, tau[seg], tau[seg + 1], rate[seg], rate[seg + 1]};
    // invert tau~(t~) by Newton from the linear guess
    const double span = tau[seg + 1] - tau[seg];
    double t = a.time + (span > 0 ? h * (target - tau[seg]) / span : 0.0);
    for (int it = 0; it < 20; ++it) {
      const double dt = (clock.value(t) - target) / clock.derivative(t);
      t = std::clamp(t - dt, a.time, b.time);
      if (std::abs(dt) <= 1e-15 * std::max(1.0, std::abs(t))) break;
    }
    xi[j] = hermite_complex(a.time, h, a.z * a.z, b.z * b.z, 2.0 * a.z * a.w, 2.0 * b.z * b.w, t);
  }

  report.kepler.reserve(points);
  for (std::size_t j = 0; j < points; ++j) {
    KeplerSample sample{static_cast<double>(j) * step, xi[j], {kNaN, kNaN}, {kNaN, kNaN}, kNaN};
    if (j >= kHalfWidth && j + kHalfWidth < points) {
      sample.xi_prime = central_first_derivative(&xi[j], step);
      sample.xi_second = central_second_derivative(&xi[j], step);
      const double r = std::abs(xi[j]);
      sample.residual = std::abs(sample.xi_second + report.kappa * xi[j] / (r * r * r));
      report.max_residual = std::max(report.max_residual, sample.residual);
    }
    report.kepler.push_back(sample);
  }
  if (points < 2 * kHalfWidth + 1)
    fail(ErrorKind::InvalidInput, "trajectory too short for the differentiation stencil");
  return report;
}

std::vector<PlanarState> oscillator_trajectory(EomForm form, const CentralParams& params, Complex z0, Complex w0,
                                               double span, std::size_t n_samples, const IntegratorSpec& spec) {
  if (!is_proper_time_form(form)) fail(ErrorKind::InvalidArgument, "oscillator trajectories are taken in proper time");
  const auto metric = central_metric(CentralKind::Hooke, params);
  Vectord x0(2), u0(2);
  x0 << z0.real(), z0.imag();
  u0 << w0.real(), w0.imag();
  const auto sim = simulate_native(form, metric, x0, u0, span, spec, n_samples);
  if (!sim.report.completed())
    fail(ErrorKind::InvalidInput, "oscillator integration stopped early: " + sim.report.message);
  std::vector<PlanarState> out;
  out.reserve(sim.report.samples.size());
  for (const auto& s : sim.report.samples) out.push_back({s.t, {s.y[0], s.y[1]}, {s.y[2], s.y[3]}});
  return out;
}

}  // namespace relmech
