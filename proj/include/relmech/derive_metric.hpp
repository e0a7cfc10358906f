#pragma once

// Reconstruction of g00 from a classical acceleration field: U is recovered
// by line integration of -m a, pinned to zero at a reference point or at
// infinity, and checked for path independence.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "relmech/core.hpp"

namespace relmech {

using AccelerationField = std::function<Vectord(const Vectord&)>;

struct MetricReference {
  enum class Kind { Point, Infinity };
  Kind kind = Kind::Point;
  Vectord point;  // used for Kind::Point; empty means the origin

  static MetricReference at(Vectord p) { return {Kind::Point, std::move(p)}; }
  static MetricReference infinity() { return {Kind::Infinity, {}}; }
};

/// Probe points are drawn uniformly from the box [lower, upper].
struct ProbeDomain {
  Vectord lower;
  Vectord upper;
  std::size_t samples = 100;
  unsigned seed = 1;
};

struct MetricSample {
  Vectord x;
  double potential;
  double g00;
};

struct DerivedMetric {
  StaticMetric<double> metric;  // value by quadrature, gradient -m a
  std::vector<MetricSample> samples;
  double max_path_mismatch = 0;  // max |U_path1 - U_path2| over the probes
};

/// Line-integral tolerances.
inline constexpr double kDeriveQuadratureRtol = 1e-10;
inline constexpr double kDerivePathTolerance = 1e-8;

/// Throws Error{NotAPotential} when two independent paths disagree by more
/// than kDerivePathTolerance (relative to max(1, |U|)) at any probe point.
DerivedMetric derive_metric_from_eom(const AccelerationField& acceleration, const Constants<double>& constants,
                                     const ProbeDomain& domain, const MetricReference& reference = {});

}  // namespace relmech
