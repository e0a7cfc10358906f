#pragma once

#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <random>

#include "relmech/core.hpp"

namespace relmech::test {

inline Vectord vec(std::initializer_list<double> values) {
  Vectord v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline StaticMetric<double> flat(int dim = 1, double c = 1, double m = 1) {
  return {free_potential<double>(), {c, m}, dim};
}

inline StaticMetric<double> hooke(double k, int dim = 1, double c = 1, double m = 1) {
  return {hooke_potential(k), {c, m}, dim};
}

inline StaticMetric<double> kepler(double gm, int dim = 2, double c = 1, double m = 1) {
  return {kepler_potential(gm, 1.0, m), {c, m, gm}, dim};
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

/// Uniform random vector with |v| < radius.
inline Vectord random_ball(std::mt19937_64& rng, int dim, double radius) {
  std::uniform_real_distribution<double> u(-1, 1);
  Vectord v(dim);
  do {
    for (int i = 0; i < dim; ++i) v[i] = u(rng);
  } while (v.norm() >= 1);
  return radius * v;
}

}  // namespace relmech::test
