#pragma once

// Test-only reference computations. Nothing here calls into the library's formula code.

#include <cmath>
#include <functional>
#include <limits>

namespace aor::oracle {

struct SeriesMoments {
  double e_s, e_t, e_t2, e_z, e_z2, aoi;
};

// Truncated sums of the per-path delivery probabilities. Direct-link deliveries after l source
// transmissions, relay deliveries after m source and n relay transmissions, and the two
// preemption cases that restart the delivery interval; E[T] and E[T^2] solve the renewal
// recursion T = (elapsed) + T' with E[T'] = E[T].
inline SeriesMoments series_moments(double p, double p1, double p2, double p3, int terms = 400) {
  const double q = 1.0 - p;
  double direct = 0, direct_1 = 0, direct_2 = 0;
  double relay = 0, relay_1 = 0, relay_2 = 0;
  double restart = 0, restart_1 = 0, restart_2 = 0;

  for (int l = 1; l < terms; ++l) {
    const double pl = std::pow(q * (1 - p2) * (1 - p1), l - 1) * p1;
    direct += pl;
    direct_1 += pl * l;
    direct_2 += pl * l * l;
    const double pre = std::pow((1 - p1) * (1 - p2), l) * std::pow(q, l - 1) * p;
    restart += pre;
    restart_1 += pre * l;
    restart_2 += pre * l * l;
  }
  for (int m = 1; m < terms; ++m) {
    const double head = std::pow(q * (1 - p2), m - 1) * std::pow(1 - p1, m) * p2;
    for (int n = 1; n < terms; ++n) {
      const double pmn = head * std::pow(q, n) * std::pow(1 - p3, n - 1) * p3;
      relay += pmn;
      relay_1 += pmn * (m + n);
      relay_2 += pmn * (m + n) * (m + n);
    }
    for (int n = 0; n < terms; ++n) {
      const double pre = head * std::pow(q * (1 - p3), n) * p;
      restart += pre;
      restart_1 += pre * (m + n);
      restart_2 += pre * (m + n) * (m + n);
    }
  }

  SeriesMoments r{};
  r.e_s = (direct_1 + relay_1) / (direct + relay);
  r.e_t = (direct_1 + relay_1 + restart_1) / (1.0 - restart);
  r.e_t2 = (direct_2 + relay_2 + restart_2 + 2.0 * r.e_t * restart_1) / (1.0 - restart);
  const double e_w = q / p;
  const double e_w2 = q / p + 2.0 * q * q / (p * p);  // Var + mean^2 of a geometric on {0,1,...}
  r.e_z = e_w + r.e_t;
  r.e_z2 = e_w2 + 2.0 * e_w * r.e_t + r.e_t2;
  r.aoi = r.e_s + r.e_z2 / (2.0 * r.e_z) - 0.5;
  return r;
}

inline double central_difference(const std::function<double(double)>& f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Exhaustive scan of f over `points` evenly spaced values in [lo, hi].
inline double grid_argmin(const std::function<double(double)>& f, double lo, double hi, int points) {
  double best_x = lo;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double x = i + 1 == points ? hi : lo + (hi - lo) * i / (points - 1);
    const double v = f(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  return best_x;
}

/// Bisection for the switch point of a predicate that is true below and false above.
inline double bisect_switch(const std::function<bool(double)>& below, double lo, double hi, int iterations = 60) {
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace aor::oracle
