#pragma once

// Equations of motion on the static metric family, conserved quantities and
// the deformed Euler-Lagrange residual.
//
// Every form is a first-order system over y = [x (dim), u (dim), s], where u
// is the form's native velocity-like variable and s is the "other" time:
//
//   form                     parameter   u            s
//   RelativisticCoordTime    t           v = dx/dt    t~   (dt~/dt = 1/Gamma)
//   RelativisticProperTime   t~          dx/dt~       t    (dt/dt~ = Gamma)
//   Covariant                t~          dx/dt~       t
//   SemiRelativistic         t           v            t~   (dt~/dt = 1/gamma)
//   SemiRelativisticLowV     t~          dx/dt~       t    (dt/dt~ = gamma)
//   Classical                t           v            t~   (metric Gamma)
//   HamiltonianExact         t           p            t~
//   HamiltonianWeak          t           p            t~   (gamma from |p|)

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "relmech/core.hpp"
#include "relmech/kinematics.hpp"

namespace relmech {

enum class EomForm {
  RelativisticCoordTime,  // d/dt(m Gamma v) = -Gamma grad U
  RelativisticProperTime, // m d2x/dt~2 = -Gamma^2 grad U
  Covariant,              // d2x/dt~2 = (K^2 c^2/2) grad(1/g00)
  SemiRelativistic,       // m d/dt(gamma v) = -gamma grad U
  SemiRelativisticLowV,   // m d2x/dt~2 = -grad U
  Classical,              // m d2x/dt2 = -grad U
  HamiltonianExact,       // H = sqrt(g00) sqrt(|p|^2 c^2 + m^2 c^4)
  HamiltonianWeak,        // H = sqrt(|p|^2 c^2 + m^2 c^4) + U
};

std::string_view to_string(EomForm form) noexcept;
EomForm parse_form(std::string_view name);

constexpr bool is_proper_time_form(EomForm form) {
  return form == EomForm::RelativisticProperTime || form == EomForm::Covariant ||
         form == EomForm::SemiRelativisticLowV;
}

constexpr bool is_hamiltonian_form(EomForm form) {
  return form == EomForm::HamiltonianExact || form == EomForm::HamiltonianWeak;
}

template <typename Scalar>
struct StateDerivative {
  Vector<Scalar> dx;  // dx/d(parameter)
  Vector<Scalar> du;  // derivative of the native velocity-like variable
};

template <typename Scalar>
struct PhaseDerivative {
  Vector<Scalar> dx;
  Vector<Scalar> dp;
};

/// Hamilton's equations for the exact or weak-potential Hamiltonian.
template <typename Scalar>
PhaseDerivative<Scalar> hamiltonian_rhs(EomForm form, const Vector<Scalar>& x, const Vector<Scalar>& p,
                                        const StaticMetric<Scalar>& metric) {
  using std::sqrt;
  const auto& k = metric.constants();
  const Scalar mc = k.m * k.c;
  const Scalar root = sqrt(p.squaredNorm() + mc * mc);  // sqrt(|p|^2 + m^2 c^2)
  const Vector<Scalar> grad_u = metric.potential().gradient(x);
  if (form == EomForm::HamiltonianExact) {
    const Scalar g00 = metric_g00(metric, x);
    if (!(g00 > 0))
      fail(ErrorKind::InsideHorizon, "exact Hamiltonian requires g00 > 0 at x = " + format_vector(x));
    const Scalar sg = sqrt(g00);
    return {(sg * k.c / root) * p, -(root / mc / sg) * grad_u};
  }
  if (form == EomForm::HamiltonianWeak) {
    metric.check_point(x);
    return {(k.c / root) * p, -grad_u};
  }
  fail(ErrorKind::InvalidArgument, "hamiltonian_rhs requires a Hamiltonian form");
}

/// Right-hand side of a form in its native variables (x, u). Returns
/// StateDerivative{dx/ds, du/ds} for parameter s of that form.
template <typename Scalar>
StateDerivative<Scalar> native_rhs(EomForm form, const Vector<Scalar>& x, const Vector<Scalar>& u,
                                   const StaticMetric<Scalar>& metric) {
  using std::sqrt;
  const auto& k = metric.constants();
  const Scalar c2 = k.c * k.c;
  switch (form) {
    case EomForm::RelativisticCoordTime: {
      // m(Gamma a + v dGamma/dt) = -Gamma grad U with
      // dGamma/dt = Gamma^3 (v.a/c^2 - grad g00 . v / 2), solved for a via
      // (I + Gamma^2 v v^T/c^2)^-1 and 1 + Gamma^2 beta^2 = Gamma^2 g00.
      const ParticleState<Scalar> s{0, x, u};
      const Scalar gamma = metric_gamma(s, metric);
      const Scalar g00 = metric_g00(metric, x);
      const Vector<Scalar> grad_u = metric.potential().gradient(x);
      const Vector<Scalar> f =
          -grad_u / k.m + (gamma * gamma * grad_u.dot(u) / (k.m * c2)) * u;
      return {u, f - (u.dot(f) / (c2 * g00)) * u};
    }
    case EomForm::RelativisticProperTime:
    case EomForm::Covariant: {
      const Scalar g00 = metric_g00(metric, x);
      if (!(g00 > 0))
        fail(ErrorKind::InsideHorizon, "proper-time flow requires g00 > 0 at x = " + format_vector(x));
      const Scalar gamma2 = (1 + u.squaredNorm() / c2) / g00;  // Gamma^2 from dx/dt~
      if (form == EomForm::RelativisticProperTime)
        return {u, -(gamma2 / k.m) * metric.potential().gradient(x)};
      // K^2 = (Gamma g00)^2 held fixed while differentiating Gamma^2 g00 = K^2/g00
      const Scalar k2 = gamma2 * g00 * g00;
      const Vector<Scalar> grad_inv_g00 = -metric_g00_gradient(metric, x) / (g00 * g00);
      return {u, (k2 * c2 / 2) * grad_inv_g00};
    }
    case EomForm::SemiRelativistic: {
      lorentz_gamma(u, k.c);
      const Vector<Scalar> f = -metric.potential().gradient(x) / k.m;
      return {u, f - (u.dot(f) / c2) * u};
    }
    case EomForm::SemiRelativisticLowV:
    case EomForm::Classical:
      metric.check_point(x);
      return {u, -metric.potential().gradient(x) / k.m};
    case EomForm::HamiltonianExact:
    case EomForm::HamiltonianWeak: {
      auto d = hamiltonian_rhs(form, x, u, metric);
      return {std::move(d.dx), std::move(d.dp)};
    }
  }
  fail(ErrorKind::InvalidArgument, "unknown equation-of-motion form");
}

/// dt/d(parameter) and dt~/d(parameter) given native variables.
template <typename Scalar>
struct TimeRates {
  Scalar coordinate;  // dt/ds
  Scalar proper;      // dt~/ds
};

template <typename Scalar>
TimeRates<Scalar> time_rates(EomForm form, const Vector<Scalar>& x, const Vector<Scalar>& u,
                             const StaticMetric<Scalar>& metric) {
  using std::sqrt;
  const auto& k = metric.constants();
  const Scalar c2 = k.c * k.c;
  switch (form) {
    case EomForm::RelativisticCoordTime:
    case EomForm::Classical:
      return {1, 1 / metric_gamma(ParticleState<Scalar>{0, x, u}, metric)};
    case EomForm::SemiRelativistic:
      return {1, 1 / lorentz_gamma(u, k.c)};
    case EomForm::RelativisticProperTime:
    case EomForm::Covariant: {
      const Scalar g00 = metric_g00(metric, x);
      if (!(g00 > 0))
        fail(ErrorKind::InsideHorizon, "proper-time flow requires g00 > 0 at x = " + format_vector(x));
      return {sqrt((1 + u.squaredNorm() / c2) / g00), 1};
    }
    case EomForm::SemiRelativisticLowV:
      metric.check_point(x);
      return {sqrt(1 + u.squaredNorm() / c2), 1};
    case EomForm::HamiltonianExact: {
      const Scalar g00 = metric_g00(metric, x);
      if (!(g00 > 0)) fail(ErrorKind::InsideHorizon, "exact Hamiltonian requires g00 > 0");
      const Scalar mc = k.m * k.c;
      return {1, sqrt(g00) / sqrt(1 + u.squaredNorm() / (mc * mc))};
    }
    case EomForm::HamiltonianWeak: {
      const Scalar mc = k.m * k.c;
      return {1, 1 / sqrt(1 + u.squaredNorm() / (mc * mc))};
    }
  }
  fail(ErrorKind::InvalidArgument, "unknown equation-of-motion form");
}

/// Native velocity-like variable for a coordinate-time state.
template <typename Scalar>
Vector<Scalar> to_native(EomForm form, const ParticleState<Scalar>& state, const StaticMetric<Scalar>& metric) {
  const auto& k = metric.constants();
  switch (form) {
    case EomForm::RelativisticCoordTime:
    case EomForm::SemiRelativistic:
    case EomForm::Classical:
      return state.v;
    case EomForm::RelativisticProperTime:
    case EomForm::Covariant:
      return metric_gamma(state, metric) * state.v;
    case EomForm::SemiRelativisticLowV:
      return lorentz_gamma(state.v, k.c) * state.v;
    case EomForm::HamiltonianExact:
      return k.m * metric_gamma(state, metric) * state.v;
    case EomForm::HamiltonianWeak:
      return k.m * lorentz_gamma(state.v, k.c) * state.v;
  }
  fail(ErrorKind::InvalidArgument, "unknown equation-of-motion form");
}

/// Coordinate velocity dx/dt from native variables.
template <typename Scalar>
Vector<Scalar> coordinate_velocity(EomForm form, const Vector<Scalar>& x, const Vector<Scalar>& u,
                                   const StaticMetric<Scalar>& metric) {
  switch (form) {
    case EomForm::RelativisticCoordTime:
    case EomForm::SemiRelativistic:
    case EomForm::Classical:
      return u;
    case EomForm::RelativisticProperTime:
    case EomForm::Covariant:
    case EomForm::SemiRelativisticLowV:
      return u / time_rates(form, x, u, metric).coordinate;
    case EomForm::HamiltonianExact:
    case EomForm::HamiltonianWeak:
      return hamiltonian_rhs(form, x, u, metric).dx;
  }
  fail(ErrorKind::InvalidArgument, "unknown equation-of-motion form");
}

/// Equation of motion evaluated at a coordinate-time state. Proper-time forms
/// return (dx/dt~, d2x/dt~2); coordinate-time forms (v, dv/dt); Hamiltonian
/// forms (dx/dt, dp/dt) with p mapped from v.
template <typename Scalar>
StateDerivative<Scalar> eom_rhs(EomForm form, const ParticleState<Scalar>& state,
                                const StaticMetric<Scalar>& metric) {
  return native_rhs(form, state.x, to_native(form, state, metric), metric);
}

template <typename Scalar = double>
struct ConservedSet {
  Scalar energy;            // mc^2 g00 Gamma
  Scalar k2;                // (Gamma g00)^2
  Scalar angular_momentum;  // m Gamma (x v_y - y v_x); NaN for dim 1
  Scalar semi_hamiltonian;  // m/2 |gamma v|^2 + U, the semi-relativistic H
};

template <typename Scalar>
ConservedSet<Scalar> conserved(const ParticleState<Scalar>& state, const StaticMetric<Scalar>& metric) {
  const auto& k = metric.constants();
  const Scalar gamma = metric_gamma(state, metric);
  const Scalar g00 = metric_g00(metric, state.x);
  const Scalar kk = gamma * g00;
  Scalar lphi = std::numeric_limits<Scalar>::quiet_NaN();
  if (state.x.size() >= 2)
    lphi = k.m * gamma * (state.x[0] * state.v[1] - state.x[1] * state.v[0]);
  // gamma v is undefined for |v| >= c, which is admissible where g00 > 1
  Scalar h_sr = std::numeric_limits<Scalar>::quiet_NaN();
  const Scalar beta2 = state.v.squaredNorm() / (k.c * k.c);
  if (beta2 < 1) h_sr = k.m * state.v.squaredNorm() / (1 - beta2) / 2 + metric.potential()(state.x);
  return {k.rest_energy() * g00 * gamma, kk * kk, lphi, h_sr};
}

/// Residual of the deformed Euler-Lagrange equation for L = m|v|^2/2 - U:
///   [d/dt(dL/dv) - dL/dx] - Gamma^2 (dL/dv) (dL/dt) / L0,  L0 = -mc^2.
/// Zero iff the acceleration satisfies the relativistic flow.
template <typename Scalar>
Vector<Scalar> deformed_el_residual(const ParticleState<Scalar>& state, const Vector<Scalar>& acceleration,
                                    const StaticMetric<Scalar>& metric) {
  const auto& k = metric.constants();
  const Scalar gamma = metric_gamma(state, metric);
  const Vector<Scalar> grad_u = metric.potential().gradient(state.x);
  const Vector<Scalar> dl_dv = k.m * state.v;
  const Scalar dl_dt = k.m * state.v.dot(acceleration) - grad_u.dot(state.v);
  const Vector<Scalar> euler_lagrange = k.m * acceleration + grad_u;
  return euler_lagrange - (gamma * gamma * dl_dt / k.ground_lagrangian()) * dl_dv;
}

}  // namespace relmech
