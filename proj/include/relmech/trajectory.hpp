#pragma once

// Integration of a particle under one equation-of-motion form, recorded as
// coordinate-time rows with the derived invariants alongside.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "relmech/core.hpp"
#include "relmech/dynamics.hpp"
#include "relmech/integrate.hpp"

namespace relmech {

struct TrajectoryRow {
  double t;
  double proper_time;
  Vectord x;
  Vectord v;  // dx/dt
  double gamma;  // metric Gamma, NaN where the state is not admissible
  double energy;
  double angular_momentum;  // NaN for dim 1
  double k2;
};

struct Trajectory {
  int dim = 1;
  std::vector<TrajectoryRow> rows;
};

/// Names of the monitored quantities, in the order of IntegrationReport::max_drift.
inline const std::vector<std::string>& monitored_quantities() {
  static const std::vector<std::string> names{"energy", "k2", "angular_momentum", "semi_hamiltonian"};
  return names;
}

struct Simulation {
  EomForm form;
  Trajectory trajectory;
  IntegrationReport report;  // samples hold the packed native state [x, u, s]
};

/// Packed native state y = [x, u, s] (see dynamics.hpp for the layout).
OdeState pack_state(const Vectord& x, const Vectord& u, double s);
OdeRhs form_rhs(EomForm form, const StaticMetric<double>& metric);
OdeGuard form_guard(EomForm form, const StaticMetric<double>& metric);

/// Integrates over `span` units of the form's own parameter (t, or t~ for
/// proper-time forms) from a coordinate-time initial state, recording
/// n_samples + 1 evenly spaced rows.
Simulation simulate(EomForm form, const StaticMetric<double>& metric, const ParticleStated& initial, double span,
                    IntegratorSpec spec, std::size_t n_samples);

/// Same, starting from native variables (x, u) with the other time at zero.
Simulation simulate_native(EomForm form, const StaticMetric<double>& metric, const Vectord& x0, const Vectord& u0,
                           double span, IntegratorSpec spec, std::size_t n_samples);

/// Row for one packed native state at parameter value s.
TrajectoryRow make_row(EomForm form, const StaticMetric<double>& metric, double parameter, const OdeState& y);

/// 17 significant digits, header names columns and units.
void write_csv(std::ostream& os, const Trajectory& trajectory);

}  // namespace relmech
