#include "relmech/trajectory.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace relmech {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Unpacked {
  Vectord x, u;
  double s;
};

Unpacked unpack(const OdeState& y, int dim) {
  return {y.segment(0, dim), y.segment(dim, dim), y[2 * dim]};
}

}  // namespace

OdeState pack_state(const Vectord& x, const Vectord& u, double s) {
  const Eigen::Index dim = x.size();
  OdeState y(2 * dim + 1);
  y << x, u, s;
  return y;
}

OdeRhs form_rhs(EomForm form, const StaticMetric<double>& metric) {
  return [form, metric](double, const OdeState& y) {
    const auto [x, u, s] = unpack(y, metric.dim());
    const auto d = native_rhs(form, x, u, metric);
    const auto rates = time_rates(form, x, u, metric);
    const double other = is_proper_time_form(form) ? rates.coordinate : rates.proper;
    return pack_state(d.dx, d.du, other);
  };
}

OdeGuard form_guard(EomForm form, const StaticMetric<double>& metric) {
  return [form, metric](double, const OdeState& y) -> std::optional<std::string> {
    const auto [x, u, s] = unpack(y, metric.dim());
    const double c = metric.constants().c;
    try {
      switch (form) {
        case EomForm::RelativisticCoordTime:
        case EomForm::Classical:
          if (!is_admissible(ParticleStated{0, x, u}, metric)) {
            return "speed limit exceeded: |v| = " + std::to_string(u.norm()) + " >= c*sqrt(g00) = " +
                   std::to_string(c * std::sqrt(std::max(0.0, metric_g00(metric, x)))) + " at x = " +
                   format_vector(x);
          }
          break;
        case EomForm::SemiRelativistic:
          if (!(u.norm() < c)) return "speed limit exceeded: |v| = " + std::to_string(u.norm()) + " >= c";
          break;
        case EomForm::RelativisticProperTime:
        case EomForm::Covariant:
        case EomForm::HamiltonianExact:
          if (!(metric_g00(metric, x) > kAdmissibilityMargin))
            return "g00 <= 0 at x = " + format_vector(x);
          break;
        case EomForm::SemiRelativisticLowV:
        case EomForm::HamiltonianWeak:
          metric.potential()(x);
          break;
      }
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::nullopt;
  };
}

TrajectoryRow make_row(EomForm form, const StaticMetric<double>& metric, double parameter, const OdeState& y) {
  const auto [x, u, s] = unpack(y, metric.dim());
  TrajectoryRow row;
  row.t = is_proper_time_form(form) ? s : parameter;
  row.proper_time = is_proper_time_form(form) ? parameter : s;
  row.x = x;
  row.v = coordinate_velocity(form, x, u, metric);
  const ParticleStated state{row.t, x, row.v};
  if (is_admissible(state, metric)) {
    const auto q = conserved(state, metric);
    row.gamma = metric_gamma(state, metric);
    row.energy = q.energy;
    row.angular_momentum = q.angular_momentum;
    row.k2 = q.k2;
  } else {
    row.gamma = row.energy = row.angular_momentum = row.k2 = kNaN;
  }
  return row;
}

Simulation simulate_native(EomForm form, const StaticMetric<double>& metric, const Vectord& x0, const Vectord& u0,
                           double span, IntegratorSpec spec, std::size_t n_samples) {
  metric.check_point(x0);
  if (u0.size() != x0.size()) fail(ErrorKind::InvalidArgument, "velocity and position dimensions differ");
  if (n_samples == 0) fail(ErrorKind::InvalidArgument, "need at least one sample interval");
  if (!spec.guard) spec.guard = form_guard(form, metric);

  auto monitor = [form, metric](double, const OdeState& y) {
    const auto [x, u, s] = unpack(y, metric.dim());
    const ParticleStated state{0, x, coordinate_velocity(form, x, u, metric)};
    Eigen::VectorXd q(4);
    if (!is_admissible(state, metric)) {
      q.setConstant(kNaN);
      return q;
    }
    const auto c = conserved(state, metric);
    q << c.energy, c.k2, c.angular_momentum, c.semi_hamiltonian;
    return q;
  };

  const auto times = uniform_times(0, span, n_samples);
  Simulation sim{form, {metric.dim(), {}}, integrate(form_rhs(form, metric), pack_state(x0, u0, 0), 0, span, spec,
                                                      times, monitor)};
  sim.trajectory.rows.reserve(sim.report.samples.size());
  for (const auto& sample : sim.report.samples) sim.trajectory.rows.push_back(make_row(form, metric, sample.t, sample.y));
  return sim;
}

Simulation simulate(EomForm form, const StaticMetric<double>& metric, const ParticleStated& initial, double span,
                    IntegratorSpec spec, std::size_t n_samples) {
  metric.check_point(initial.x);
  if (initial.v.size() != initial.x.size()) fail(ErrorKind::InvalidArgument, "velocity and position dimensions differ");
  return simulate_native(form, metric, initial.x, to_native(form, initial, metric), span, std::move(spec), n_samples);
}

void write_csv(std::ostream& os, const Trajectory& trajectory) {
  static const char* axes[] = {"x", "y", "z"};
  const int dim = trajectory.dim;
  os << "t[time],proper_time[time]";
  for (int i = 0; i < dim; ++i) os << ',' << axes[i] << "[length]";
  for (int i = 0; i < dim; ++i) os << ",v" << axes[i] << "[length/time]";
  os << ",Gamma[1],energy[mass*length^2/time^2]";
  if (dim >= 2) os << ",p_phi[mass*length^2/time]";
  os << ",K2[1]\n";

  const auto old_precision = os.precision(17);
  for (const auto& row : trajectory.rows) {
    os << row.t << ',' << row.proper_time;
    for (int i = 0; i < dim; ++i) os << ',' << row.x[i];
    for (int i = 0; i < dim; ++i) os << ',' << row.v[i];
    os << ',' << row.gamma << ',' << row.energy;
    if (dim >= 2) os << ',' << row.angular_momentum;
    os << ',' << row.k2 << '\n';
  }
  os.precision(old_precision);
}

}  // namespace relmech
