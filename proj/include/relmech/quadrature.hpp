#pragma once

#include <functional>

namespace relmech {

struct QuadratureResult {
  double value;
  double error;  // estimated absolute error
  int evaluations;
};

/// Globally adaptive Gauss-Kronrod 7-15 on a finite interval. Bisects the worst
/// panel until err <= max(atol, rtol |value|) or the panel budget runs out.
QuadratureResult integrate_gk(const std::function<double(double)>& f, double a, double b, double rtol = 1e-10,
                              double atol = 1e-14, int max_panels = 4000);

}  // namespace relmech
