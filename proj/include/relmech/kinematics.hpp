#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "relmech/core.hpp"

namespace relmech {

enum class LagrangianRegime {
  Relativistic,          // L0 sqrt(1 + 2L/L0)
  Effective,             // m/2 (|v|^2 - c^2 g00)
  SemiRelativistic,      // -mc^2/gamma - U
  SemiRelativisticFull,  // -mc^2/gamma - U gamma
  Classical,             // m|v|^2/2 - U
};

std::string_view to_string(LagrangianRegime regime) noexcept;
LagrangianRegime parse_regime(std::string_view name);

/// States closer than this to the local speed limit are rejected.
inline constexpr double kAdmissibilityMargin = 1e-14;

/// gamma = 1/sqrt(1 - |v|^2/c^2)
template <typename Scalar>
Scalar lorentz_gamma(const Vector<Scalar>& v, Scalar c) {
  using std::sqrt;
  const Scalar beta2 = v.squaredNorm() / (c * c);
  if (!(beta2 < 1))
    fail(ErrorKind::SpeedLimitExceeded, "|v| >= c for v = " + format_vector(v));
  return 1 / sqrt(1 - beta2);
}

/// g00(x) - |v|^2/c^2, the quantity whose inverse square root is dt/dt~.
template <typename Scalar>
Scalar speed_gap(const ParticleState<Scalar>& state, const StaticMetric<Scalar>& metric) {
  const Scalar c = metric.constants().c;
  return metric_g00(metric, state.x) - state.v.squaredNorm() / (c * c);
}

template <typename Scalar>
bool is_admissible(const ParticleState<Scalar>& state, const StaticMetric<Scalar>& metric) {
  return speed_gap(state, metric) >= Scalar(kAdmissibilityMargin);
}

/// Gamma = dt/dt~ = 1/sqrt(g00(x) - |v|^2/c^2), from the gap itself.
template <typename Scalar>
Scalar metric_gamma(const ParticleState<Scalar>& state, const StaticMetric<Scalar>& metric) {
  using std::sqrt;
  const Scalar gap = speed_gap(state, metric);
  if (!(gap >= Scalar(kAdmissibilityMargin))) {
    const Scalar c = metric.constants().c;
    const Scalar g00 = metric_g00(metric, state.x);
    const Scalar limit = g00 > 0 ? c * sqrt(g00) : Scalar(0);
    fail(ErrorKind::SpeedLimitExceeded,
         "speed limit exceeded: |v| = " + std::to_string(double(state.v.norm())) +
             " >= c*sqrt(g00) = " + std::to_string(double(limit)) + " at x = " +
             format_vector(state.x) + ", v = " + format_vector(state.v));
  }
  return 1 / sqrt(gap);
}

/// L = m|v|^2/2 - U(x)
template <typename Scalar>
Scalar classical_lagrangian(const ParticleState<Scalar>& state, const ScalarPotential<Scalar>& potential,
                            Scalar m) {
  return m * state.v.squaredNorm() / 2 - potential(state.x);
}

template <typename Scalar>
Scalar relativistic_lagrangian(const ParticleState<Scalar>& state, const StaticMetric<Scalar>& metric,
                               LagrangianRegime regime) {
  const auto& k = metric.constants();
  const Scalar mc2 = k.rest_energy();
  switch (regime) {
    case LagrangianRegime::Relativistic:
      // L0 sqrt(1 + 2L/L0) = -mc^2 sqrt(g00 - beta^2) = L0 / Gamma
      return k.ground_lagrangian() / metric_gamma(state, metric);
    case LagrangianRegime::Effective:
      return k.m * (state.v.squaredNorm() - k.c * k.c * metric_g00(metric, state.x)) / 2;
    case LagrangianRegime::SemiRelativistic:
      return -mc2 / lorentz_gamma(state.v, k.c) - metric.potential()(state.x);
    case LagrangianRegime::SemiRelativisticFull: {
      const Scalar gamma = lorentz_gamma(state.v, k.c);
      return -mc2 / gamma - metric.potential()(state.x) * gamma;
    }
    case LagrangianRegime::Classical:
      return classical_lagrangian(state, metric.potential(), k.m);
  }
  fail(ErrorKind::InvalidArgument, "unknown Lagrangian regime");
}

template <typename Scalar>
struct MomentumEnergy {
  Vector<Scalar> p;
  Scalar energy;
};

/// p = m Gamma v, E = mc^2 g00 Gamma; satisfies E^2 = g00 (|p|^2 c^2 + m^2 c^4).
template <typename Scalar>
MomentumEnergy<Scalar> momenta_energy(const ParticleState<Scalar>& state,
                                      const StaticMetric<Scalar>& metric) {
  const auto& k = metric.constants();
  const Scalar gamma = metric_gamma(state, metric);
  return {k.m * gamma * state.v, k.rest_energy() * metric_g00(metric, state.x) * gamma};
}

/// Local speed limit c sqrt(g00(x)).
template <typename Scalar>
Scalar speed_limit(const StaticMetric<Scalar>& metric, const Vector<Scalar>& x) {
  using std::sqrt;
  const Scalar g00 = metric_g00(metric, x);
  if (g00 < 0)
    fail(ErrorKind::InsideHorizon, "g00 = " + std::to_string(double(g00)) + " < 0 at x = " + format_vector(x));
  return metric.constants().c * sqrt(g00);
}

}  // namespace relmech
