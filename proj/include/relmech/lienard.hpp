#pragma once

// Relativistic Lienard oscillator gamma^3 x'' + gamma f(x) x' + g(x) = 0, its
// Chiellini first integral and the damped metric reconstructed from it.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "relmech/integrate.hpp"

namespace relmech {

struct LienardSystem {
  std::function<double(double)> f;  // damping, 1/time
  std::function<double(double)> g;  // force term, length/time^2
  double alpha = -0.5;              // Chiellini parameter
  double c = 1;
  double m = 1;
  std::string f_label = "f";
  std::string g_label = "g";

  void validate() const;
  double chiellini_factor() const { return alpha * (1 + alpha); }
};

/// f = kappa, g = x.
LienardSystem damped_oscillator(double kappa, double alpha, double c, double m = 1);

/// xddot = -(gamma f xdot + g)/gamma^3. Throws SpeedLimitExceeded for |xdot| >= c.
double lienard_rhs(const LienardSystem& system, double x, double xdot);

/// Real roots of alpha(1+alpha) = -1/kappa^2, ascending; a single root at |kappa| = 2.
std::vector<double> chiellini_alpha(double kappa);

/// max |d/dx(g/f) + alpha(1+alpha) f| over n points of [lo, hi].
double chiellini_mismatch(const LienardSystem& system, double lo, double hi, std::size_t n = 101);

struct LienardSample {
  double tau;    // proper time t~
  double t;      // coordinate time
  double x;
  double xdot;   // dx/dt
  double xprime; // dx/dt~ = gamma xdot
  double gamma;
  double omega = 0;  // accumulated int gamma f dt~
  double first_integral = 0;
};

struct LienardRun {
  std::vector<LienardSample> samples;
  IntegrationReport report;
  double max_drift = 0;  // max |I - I0| / |I0|, or max |I| when I0 = 0
};

/// Integrates x'' + gamma (f x' + g) = 0 in proper time with state [x, x', t],
/// samples n_samples + 1 uniform t~ points and evaluates I along them.
LienardRun integrate_lienard(const LienardSystem& system, double x0, double xdot0, double span,
                             std::size_t n_samples, const IntegratorSpec& spec);

/// I = e^Omega [gamma^2 xdot^2 - (g/f)(gamma xdot + g/f)/(alpha(1+alpha))].
double first_integral_value(const LienardSystem& system, double x, double xdot, double omega);

/// Fills omega (trapezoid rule in t~) and I for every sample. Throws
/// IntegratingFactor when f vanishes or changes sign along the samples.
void first_integral(const LienardSystem& system, std::vector<LienardSample>& samples);

struct DampedMetric {
  double chiellini_factor;  // alpha(1+alpha)
  double m;
  double c;
  std::function<double(double)> g_over_f;

  /// U = -m (g/f)^2 / (2 alpha(1+alpha))
  double potential(double x) const;
  /// g00 = 1 - (g/f)^2 / (c^2 alpha(1+alpha))
  double g00(double x) const;
  /// ds_d^2 = e^Omega [c^2 g00 dt^2 - dx^2]
  double line_element(double x, double dt, double dx, double omega) const;
  /// L_ed = m/2 e^Omega [xdot^2 - c^2 g00]
  double effective_lagrangian(double x, double xdot, double omega) const;
};

/// Throws DegenerateParameter when alpha(1+alpha) = 0.
DampedMetric damped_metric(const LienardSystem& system);

struct EinsteinCheck {
  double max_mismatch;  // max |e^{-2 Omega} - g00(x)| along the samples
  bool consistent;      // mismatch below 1e-6
};

EinsteinCheck einstein_consistency(const DampedMetric& metric, const std::vector<LienardSample>& samples);

/// 17 significant digits, header names columns and units.
void write_csv(std::ostream& os, const std::vector<LienardSample>& samples);

}  // namespace relmech
