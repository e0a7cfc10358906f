#pragma once

// Point-anchored Lorentz boosts that preserve G = diag(g00(x), -1, ...),
// together with the dilation, contraction and redshift formulas they imply.

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "relmech/core.hpp"
#include "relmech/kinematics.hpp"

namespace relmech {

template <typename Scalar>
using BoostEntries = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;

template <typename Scalar = double>
struct BoostMatrix {
  BoostEntries<Scalar> entries;  // Lambda^mu_nu, 2x2 or 4x4
  Vector<Scalar> anchor;         // point where g00 was evaluated
  Scalar beta = 0;
  Scalar g00 = 1;
  Scalar gamma = 1;  // 1/sqrt(g00 - beta^2)

  Eigen::Index size() const { return entries.rows(); }
};

/// Frame factor 1/sqrt(g00 - beta^2), rejecting beta^2 >= g00.
template <typename Scalar>
Scalar frame_gamma(Scalar g00, Scalar beta) {
  using std::sqrt;
  const Scalar gap = g00 - beta * beta;
  if (!(gap >= Scalar(kAdmissibilityMargin)))
    fail(ErrorKind::SuperluminalFrame, "boost requires beta^2 < g00, got beta = " + std::to_string(double(beta)) +
                                           ", g00 = " + std::to_string(double(g00)));
  return 1 / sqrt(gap);
}

/// Metric at an anchor, diag(g00, -1, ...), sized like the boost.
template <typename Scalar>
BoostEntries<Scalar> local_metric(Scalar g00, Eigen::Index size) {
  BoostEntries<Scalar> G = -BoostEntries<Scalar>::Identity(size, size);
  G(0, 0) = g00;
  return G;
}

/// Boost along the first spatial axis for a given local g00. dim is the
/// matrix size: 2 for 1+1, 4 for 3+1 (identity in the transverse block).
template <typename Scalar>
BoostMatrix<Scalar> build_boost(Scalar g00, Scalar beta, int dim, Vector<Scalar> anchor = {}) {
  using std::sqrt;
  if (dim != 2 && dim != 4) fail(ErrorKind::InvalidArgument, "boost dimension must be 2 or 4");
  if (!(g00 > 0)) fail(ErrorKind::InsideHorizon, "boost requires g00 > 0");
  const Scalar gamma = frame_gamma(g00, beta);
  const Scalar root = sqrt(g00);

  BoostMatrix<Scalar> boost;
  boost.entries = BoostEntries<Scalar>::Identity(dim, dim);
  boost.entries(0, 0) = gamma * root;
  boost.entries(0, 1) = -beta * gamma / root;
  boost.entries(1, 0) = -beta * gamma * root;
  boost.entries(1, 1) = gamma * root;
  boost.anchor = std::move(anchor);
  boost.beta = beta;
  boost.g00 = g00;
  boost.gamma = gamma;
  return boost;
}

template <typename Scalar>
BoostMatrix<Scalar> build_boost(const StaticMetric<Scalar>& metric, const Vector<Scalar>& x, Scalar beta,
                                int dim) {
  return build_boost(metric_g00(metric, x), beta, dim, x);
}

template <typename Scalar>
void check_anchor(const BoostMatrix<Scalar>& boost, const Vector<Scalar>& x) {
  if (boost.anchor.size() != x.size() || boost.anchor != x)
    fail(ErrorKind::AnchorMismatch, "boost anchored at " + format_vector(boost.anchor) +
                                        " cannot be used at " + format_vector(x));
}

/// max |Lambda^T G Lambda - G| at the anchor point.
template <typename Scalar>
Scalar verify_invariance(const BoostMatrix<Scalar>& boost, const StaticMetric<Scalar>& metric,
                         const Vector<Scalar>& x) {
  check_anchor(boost, x);
  const auto G = local_metric(metric_g00(metric, x), boost.size());
  return (boost.entries.transpose() * G * boost.entries - G).cwiseAbs().maxCoeff();
}

/// Same check against an explicitly given g00, for boosts built without a metric.
template <typename Scalar>
Scalar verify_invariance(const BoostMatrix<Scalar>& boost) {
  const auto G = local_metric(boost.g00, boost.size());
  return (boost.entries.transpose() * G * boost.entries - G).cwiseAbs().maxCoeff();
}

/// Transform a local interval (c dt, dx, ...) at point x.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1> apply_boost(
    const BoostMatrix<Scalar>& boost, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>& interval,
    const Vector<Scalar>& x) {
  check_anchor(boost, x);
  if (interval.size() != boost.size())
    fail(ErrorKind::InvalidArgument, "interval size does not match boost size");
  return boost.entries * interval;
}

/// d tau~ / d tau = Gamma sqrt(g00)
template <typename Scalar>
Scalar time_dilation(const StaticMetric<Scalar>& metric, const Vector<Scalar>& x, Scalar beta) {
  using std::sqrt;
  const Scalar g00 = metric_g00(metric, x);
  return frame_gamma(g00, beta) * sqrt(g00);
}

/// L~ = L / (sqrt(g00) Gamma) = L sqrt(g00 - beta^2) / sqrt(g00)
template <typename Scalar>
Scalar length_contraction(const StaticMetric<Scalar>& metric, const Vector<Scalar>& x, Scalar beta,
                          Scalar length) {
  using std::sqrt;
  if (!(length > 0)) fail(ErrorKind::InvalidArgument, "length must be > 0");
  const Scalar g00 = metric_g00(metric, x);
  return length / (frame_gamma(g00, beta) * sqrt(g00));
}

template <typename Scalar>
struct RedshiftResult {
  Scalar nu;
  Scalar delta_nu;
};

namespace detail {
template <typename Scalar>
Scalar horizon_factor(Scalar r, Scalar r0) {
  if (!(r > 2 * r0))
    fail(ErrorKind::Horizon, "redshift requires r > 2 r0, got r = " + std::to_string(double(r)) +
                                 ", r0 = " + std::to_string(double(r0)));
  return 2 * r0 / r;  // zero for r = inf
}
}  // namespace detail

/// nu = nu_inf sqrt(1 - 2 r0/r), r0 = GM/c^2. r may be +inf.
template <typename Scalar>
RedshiftResult<Scalar> redshift(Scalar r, Scalar r0, Scalar nu_inf) {
  using std::sqrt;
  if (!(r0 >= 0)) fail(ErrorKind::InvalidArgument, "r0 must be >= 0");
  if (!(nu_inf > 0)) fail(ErrorKind::InvalidArgument, "nu_inf must be > 0");
  const Scalar u = detail::horizon_factor(r, r0);
  const Scalar root = sqrt(1 - u);
  // sqrt(1-u) - 1 written without cancellation
  return {nu_inf * root, -nu_inf * u / (root + 1)};
}

/// First-order shift U/(mc^2) nu_inf = -(r0/r) nu_inf.
template <typename Scalar>
Scalar weak_field_redshift(Scalar r, Scalar r0, Scalar nu_inf) {
  return -(r0 / r) * nu_inf;
}

/// nu(r1)/nu(r2) = sqrt((1 - 2r0/r1)/(1 - 2r0/r2))
template <typename Scalar>
Scalar redshift_ratio(Scalar r1, Scalar r2, Scalar r0) {
  using std::sqrt;
  const Scalar u1 = detail::horizon_factor(r1, r0);
  const Scalar u2 = detail::horizon_factor(r2, r0);
  return sqrt((1 - u1) / (1 - u2));
}

}  // namespace relmech
