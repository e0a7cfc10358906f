#include "relmech/derive_metric.hpp"

#include <cmath>
#include <algorithm>
#include <memory>
#include <random>

#include "relmech/quadrature.hpp"

namespace relmech {

namespace {

constexpr double kRayAngle = 0.7;  // rotation of the second ray, radians

class LineIntegrals {
 public:
  LineIntegrals(AccelerationField a, double m) : a_(std::move(a)), m_(m) {}

  /// -m int_from^to a . dl along the straight segment.
  double segment(const Vectord& from, const Vectord& to) const {
    const Vectord d = to - from;
    if (d.squaredNorm() == 0) return 0;
    auto integrand = [&](double s) { return a_(from + s * d).dot(d); };
    return -m_ * integrate_gk(integrand, 0, 1, kDeriveQuadratureRtol).value;
  }

  /// U(r dir) with U(inf) = 0, along the ray through unit vector dir.
  double ray_from_infinity(const Vectord& dir, double r) const {
    // s = r/u maps (0, 1] onto [r, inf)
    auto integrand = [&](double u) {
      const double s = r / u;
      return a_(s * dir).dot(dir) * r / (u * u);
    };
    return m_ * integrate_gk(integrand, 0, 1, kDeriveQuadratureRtol).value;
  }

  /// -m int a . dl along the circular arc r (cos phi e + sin phi n), phi from phi0 to 0.
  double arc(const Vectord& e, const Vectord& n, double r, double phi0) const {
    auto integrand = [&](double phi) {
      const Vectord x = r * (std::cos(phi) * e + std::sin(phi) * n);
      const Vectord dx = r * (-std::sin(phi) * e + std::cos(phi) * n);
      return a_(x).dot(dx);
    };
    return m_ * integrate_gk(integrand, 0, phi0, kDeriveQuadratureRtol).value;
  }

  Vectord acceleration(const Vectord& x) const { return a_(x); }

 private:
  AccelerationField a_;
  double m_;
};

Vectord perpendicular(const Vectord& e) {
  Vectord n = Vectord::Zero(e.size());
  n[0] = -e[1];
  n[1] = e[0];
  return n.normalized();
}

}  // namespace

DerivedMetric derive_metric_from_eom(const AccelerationField& acceleration, const Constants<double>& constants,
                                     const ProbeDomain& domain, const MetricReference& reference) {
  if (!acceleration) fail(ErrorKind::InvalidArgument, "acceleration field is empty");
  const Eigen::Index dim = domain.lower.size();
  if (dim < 1 || dim > 3 || domain.upper.size() != dim)
    fail(ErrorKind::InvalidArgument, "probe domain bounds must have matching dimension 1 to 3");
  if (!(domain.upper.array() >= domain.lower.array()).all())
    fail(ErrorKind::InvalidArgument, "probe domain upper bound must be >= lower bound");
  if (domain.samples == 0) fail(ErrorKind::InvalidArgument, "probe domain needs at least one sample");

  Vectord origin = reference.point.size() ? reference.point : Vectord(Vectord::Zero(dim));
  if (reference.kind == MetricReference::Kind::Point && origin.size() != dim)
    fail(ErrorKind::InvalidArgument, "reference point dimension does not match the domain");

  auto lines = std::make_shared<LineIntegrals>(acceleration, constants.m);
  const bool at_infinity = reference.kind == MetricReference::Kind::Infinity;

  auto primary = [lines, origin, at_infinity](const Vectord& x) {
    if (!at_infinity) return lines->segment(origin, x);
    const double r = x.norm();
    if (r == 0) fail(ErrorKind::SingularPoint, "cannot integrate from infinity to the origin");
    return lines->ray_from_infinity(x / r, r);
  };

  auto secondary = [lines, origin, at_infinity, dim](const Vectord& x) {
    if (!at_infinity) {
      // axis-aligned polyline through the corners
      double u = 0;
      Vectord from = origin;
      for (Eigen::Index i = 0; i < dim; ++i) {
        Vectord to = from;
        to[i] = x[i];
        u += lines->segment(from, to);
        from = to;
      }
      return u;
    }
    const double r = x.norm();
    const Vectord e = x / r;
    if (dim == 1) return lines->ray_from_infinity(e, r);
    const Vectord n = perpendicular(e);
    const Vectord rotated = std::cos(kRayAngle) * e + std::sin(kRayAngle) * n;
    return lines->ray_from_infinity(rotated, r) + lines->arc(e, n, r, kRayAngle);
  };

  const double mc2 = constants.rest_energy();
  DerivedMetric out{StaticMetric<double>(
                        ScalarPotential<double>(
                            "derived", primary,
                            [lines, m = constants.m](const Vectord& x) -> Vectord { return -m * lines->acceleration(x); }),
                        constants, static_cast<int>(dim)),
                    {},
                    0};

  std::mt19937_64 rng(domain.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  out.samples.reserve(domain.samples);
  for (std::size_t s = 0; s < domain.samples; ++s) {
    Vectord x(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      x[i] = domain.lower[i] + (domain.upper[i] - domain.lower[i]) * unit(rng);
    const double u1 = primary(x);
    if (dim >= 2) {
      const double u2 = secondary(x);
      const double mismatch = std::abs(u1 - u2);
      out.max_path_mismatch = std::max(out.max_path_mismatch, mismatch);
      if (mismatch > kDerivePathTolerance * std::max(1.0, std::abs(u1)))
        fail(ErrorKind::NotAPotential, "acceleration field is not conservative: path integrals differ by " +
                                           std::to_string(mismatch) + " at x = " + format_vector(x));
    }
    out.samples.push_back({x, u1, 1 + 2 * u1 / mc2});
  }
  return out;
}

}  // namespace relmech
