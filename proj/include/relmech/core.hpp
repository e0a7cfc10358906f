#pragma once

// Constants, scalar potentials, the static metric g = diag(g00(x), -1, -1, -1)
// and coordinate-time particle states.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "relmech/error.hpp"

namespace relmech {

/// Spatial vectors have 1 to 3 components; storage stays on the stack.
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;
using Vectord = Vector<double>;

template <typename Scalar>
inline std::string format_vector(const Vector<Scalar>& v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

template <typename Scalar = double>
struct Constants {
  Scalar c = 1;  // speed of light
  Scalar m = 1;  // particle mass
  Scalar G = 1;  // gravitational constant, only used by the Kepler potential

  Constants() = default;
  Constants(Scalar c_, Scalar m_, Scalar G_ = 1) : c(c_), m(m_), G(G_) {
    if (!(c > 0)) fail(ErrorKind::InvalidArgument, "speed of light c must be > 0");
    if (!(m > 0)) fail(ErrorKind::InvalidArgument, "mass m must be > 0");
  }

  Scalar rest_energy() const { return m * c * c; }
  /// Ground-state relativistic Lagrangian L0 = -mc^2.
  Scalar ground_lagrangian() const { return -rest_energy(); }
};

/// Potential energy U(x) with its gradient. Built-in potentials carry an
/// analytic gradient; user potentials may fall back to central differences,
/// which is flagged through analytic_gradient().
template <typename Scalar = double>
class ScalarPotential {
 public:
  using Vec = Vector<Scalar>;
  using ValueFn = std::function<Scalar(const Vec&)>;
  using GradientFn = std::function<Vec(const Vec&)>;

  ScalarPotential(std::string label, ValueFn value, GradientFn gradient)
      : label_(std::move(label)), value_(std::move(value)), gradient_(std::move(gradient)),
        analytic_(true) {}

  ScalarPotential(std::string label, ValueFn value)
      : label_(std::move(label)), value_(std::move(value)), analytic_(false) {
    gradient_ = [value = value_](const Vec& x) {
      Vec g(x.size());
      Vec probe = x;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        using std::abs;
        using std::cbrt;
        const Scalar h =
            cbrt(std::numeric_limits<Scalar>::epsilon()) * std::max<Scalar>(Scalar(1), abs(x[i]));
        probe[i] = x[i] + h;
        const Scalar up = value(probe);
        probe[i] = x[i] - h;
        const Scalar down = value(probe);
        probe[i] = x[i];
        g[i] = (up - down) / (2 * h);
      }
      return g;
    };
  }

  Scalar operator()(const Vec& x) const { return value_(x); }
  Vec gradient(const Vec& x) const { return gradient_(x); }
  const std::string& label() const { return label_; }
  bool analytic_gradient() const { return analytic_; }

 private:
  std::string label_;
  ValueFn value_;
  GradientFn gradient_;
  bool analytic_;
};

template <typename Scalar = double>
ScalarPotential<Scalar> free_potential() {
  using Vec = Vector<Scalar>;
  return {"free", [](const Vec&) { return Scalar(0); },
          [](const Vec& x) -> Vec { return Vec::Zero(x.size()); }};
}

/// U = k r^2 / 2
template <typename Scalar = double>
ScalarPotential<Scalar> hooke_potential(Scalar k) {
  using Vec = Vector<Scalar>;
  if (!(k > 0)) fail(ErrorKind::InvalidArgument, "Hooke constant k must be > 0");
  return {"hooke", [k](const Vec& x) { return k * x.squaredNorm() / 2; },
          [k](const Vec& x) -> Vec { return k * x; }};
}

/// Radii below this are treated as the Kepler singularity.
inline constexpr double kKeplerSingularRadius = 1e-12;

/// U = -G M m / r
template <typename Scalar = double>
ScalarPotential<Scalar> kepler_potential(Scalar G, Scalar M, Scalar m) {
  using Vec = Vector<Scalar>;
  if (!(G * M > 0)) fail(ErrorKind::InvalidArgument, "Kepler strength G*M must be > 0");
  const Scalar strength = G * M * m;
  auto radius = [](const Vec& x) {
    const Scalar r = x.norm();
    if (r < Scalar(kKeplerSingularRadius))
      fail(ErrorKind::SingularPoint, "Kepler potential is singular at r = 0, x = " + format_vector(x));
    return r;
  };
  return {"kepler",
          [strength, radius](const Vec& x) { return -strength / radius(x); },
          [strength, radius](const Vec& x) -> Vec {
            const Scalar r = radius(x);
            return strength * x / (r * r * r);
          }};
}

template <typename Scalar = double>
class StaticMetric {
 public:
  using Vec = Vector<Scalar>;

  StaticMetric(ScalarPotential<Scalar> potential, Constants<Scalar> constants, int dim)
      : potential_(std::move(potential)), constants_(constants), dim_(dim) {
    if (dim < 1 || dim > 3) fail(ErrorKind::InvalidArgument, "spatial dimension must be 1, 2 or 3");
  }

  const ScalarPotential<Scalar>& potential() const { return potential_; }
  const Constants<Scalar>& constants() const { return constants_; }
  int dim() const { return dim_; }

  void check_point(const Vec& x) const {
    if (x.size() != dim_)
      fail(ErrorKind::InvalidArgument, "position has " + std::to_string(x.size()) +
                                           " components, metric has dim " + std::to_string(dim_));
  }

 private:
  ScalarPotential<Scalar> potential_;
  Constants<Scalar> constants_;
  int dim_;
};

template <typename Scalar>
struct ParticleState {
  Scalar t = 0;
  Vector<Scalar> x;
  Vector<Scalar> v;  // dx/dt
};
using ParticleStated = ParticleState<double>;

/// g00(x) = 1 + 2U(x)/(mc^2)
template <typename Scalar>
Scalar metric_g00(const StaticMetric<Scalar>& metric, const Vector<Scalar>& x) {
  metric.check_point(x);
  return 1 + 2 * metric.potential()(x) / metric.constants().rest_energy();
}

/// grad g00 = (2/mc^2) grad U, from the potential's own gradient.
template <typename Scalar>
Vector<Scalar> metric_g00_gradient(const StaticMetric<Scalar>& metric, const Vector<Scalar>& x) {
  metric.check_point(x);
  return (2 / metric.constants().rest_energy()) * metric.potential().gradient(x);
}

/// ds^2 = g00(x) c^2 dt^2 - |dx|^2, signature (+,-,-,-).
template <typename Scalar>
Scalar line_element(const StaticMetric<Scalar>& metric, Scalar dt, const Vector<Scalar>& dx,
                    const Vector<Scalar>& x) {
  const Scalar c = metric.constants().c;
  return metric_g00(metric, x) * c * c * dt * dt - dx.squaredNorm();
}

}  // namespace relmech
