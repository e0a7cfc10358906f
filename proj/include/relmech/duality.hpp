#pragma once

// Planar Hooke and Kepler systems and the Bohlin map xi = z^2, dtau~/dt~ = |xi|,
// which sends semi-relativistic oscillator orbits onto Kepler orbits.

#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "relmech/core.hpp"
#include "relmech/dynamics.hpp"
#include "relmech/integrate.hpp"
#include "relmech/kinematics.hpp"

namespace relmech {

using Complex = std::complex<double>;

struct PlanarState {
  double time;  // parameter of the stage: t, t~ or tau~
  Complex z;
  Complex w;  // dz/d(time)
};

enum class CentralKind { Hooke, Kepler };

struct CentralParams {
  double k = 1;   // Hooke constant, omega^2 = k/m
  double gm = 1;  // Kepler strength G M
  double m = 1;
  double c = 1;
};

/// Planar accelerations of the central systems, by regime:
///   Relativistic          full metric flow d/dt(m Gamma v) = -Gamma grad U, parameter t
///   SemiRelativisticFull  d/dt(gamma v) = -omega^2 gamma x or -GM gamma x/r^3, parameter t
///   SemiRelativistic      dv~/dt~ = -omega^2 x or -GM x/r^3, parameter t~
///   Effective, Classical  classical Newtonian flow, parameter t
/// u is the regime's velocity variable. Returns (dx, du).
StateDerivative<double> central_system_rhs(CentralKind kind, LagrangianRegime regime, const Vectord& x,
                                           const Vectord& u, const CentralParams& params);

/// Metric, equation-of-motion form and potential behind a central system.
StaticMetric<double> central_metric(CentralKind kind, const CentralParams& params);
EomForm central_form(LagrangianRegime regime);

/// |z| below this is treated as the branch point of z^(1/2).
inline constexpr double kBranchRadius = 1e-12;

struct BohlinPoint {
  Complex xi;
  Complex xi_prime;  // dxi/dtau~
  double kappa;      // 4H/m
};

/// xi = z^2, xi' = 2 w / conj(z) (the square root of conj(xi) taken on z's sheet).
BohlinPoint bohlin_map(Complex z, Complex w, double h, double m);

/// Oscillator energy m/2 |w|^2 + k/2 |z|^2, with w = dz/dt~.
double oscillator_energy(const PlanarState& state, double m, double k);

struct DualityOptions {
  double h_drift_tolerance = 1e-6;  // relative; exceeded -> InvalidInput
  double tau_step = 2e-3;           // uniform tau~ spacing for the stencil
};

struct KeplerSample {
  double tau;
  Complex xi;
  Complex xi_prime;
  Complex xi_second;  // from the stencil; NaN near the ends
  double residual;
};

struct DualityReport {
  double kappa = 0;
  double h_initial = 0;
  double h_drift = 0;  // max relative
  double max_residual = 0;
  std::vector<PlanarState> oscillator;  // input in t~
  std::vector<KeplerSample> kepler;     // mapped onto a uniform tau~ grid
};

/// Maps an oscillator trajectory sampled in t~ (with w = dz/dt~) onto the
/// Kepler plane and measures |xi'' + kappa xi/|xi|^3| with kappa = 4H(0)/m.
/// Samples must be dense and strictly increasing in time.
DualityReport verify_duality(const std::vector<PlanarState>& oscillator, double m, double k,
                             const DualityOptions& options = {});

/// Planar oscillator trajectory in t~ under a proper-time form
/// (SemiRelativisticLowV or RelativisticProperTime), w = dz/dt~.
std::vector<PlanarState> oscillator_trajectory(EomForm form, const CentralParams& params, Complex z0, Complex w0,
                                               double span, std::size_t n_samples, const IntegratorSpec& spec);

/// Second derivative by the 9-point central stencil, spacing h.
Complex central_second_derivative(const Complex* centre, double h);

}  // namespace relmech
