#include "relmech/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "relmech/error.hpp"

namespace relmech {

namespace {

// Kronrod nodes on [0, 1]; odd indices are the embedded Gauss points.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr double kKronrod[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr double kGauss[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Panel {
  double kronrod;
  double gauss;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double mid = (a + b) / 2;
  const double half = (b - a) / 2;
  const double fc = f(mid);
  double k = kKronrod[7] * fc;
  double g = kGauss[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    const double sum = f(mid - dx) + f(mid + dx);
    k += kKronrod[i] * sum;
    if (i % 2 == 1) g += kGauss[i / 2] * sum;
  }
  return {k * half, g * half};
}

}  // namespace

QuadratureResult integrate_gk(const std::function<double(double)>& f, double a, double b, double rtol, double atol,
                              int max_panels) {
  QuadratureResult out{0, 0, 0};
  if (a == b) return out;

  struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& other) const { return error < other.error; }
  };
  auto make = [&](double lo, double hi) {
    const Panel p = gk15(f, lo, hi);
    out.evaluations += 15;
    if (!std::isfinite(p.kronrod)) fail(ErrorKind::InvalidInput, "integrand is not finite on the interval");
    return Segment{lo, hi, p.kronrod, std::abs(p.kronrod - p.gauss)};
  };

  // global adaptive bisection of the worst segment
  std::priority_queue<Segment> queue;
  queue.push(make(a, b));
  double value = queue.top().value;
  double error = queue.top().error;
  while (error > std::max(atol, rtol * std::abs(value)) && static_cast<int>(queue.size()) < max_panels) {
    const Segment worst = queue.top();
    queue.pop();
    const double mid = (worst.a + worst.b) / 2;
    if (mid <= worst.a || mid >= worst.b) {
      queue.push(worst);
      break;
    }
    const Segment left = make(worst.a, mid);
    const Segment right = make(mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  // re-sum to shed the running-update roundoff
  out.value = 0;
  out.error = 0;
  while (!queue.empty()) {
    out.value += queue.top().value;
    out.error += queue.top().error;
    queue.pop();
  }
  return out;
}

}  // namespace relmech
