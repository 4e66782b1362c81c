#pragma once

#include "aor/model.hpp"

namespace aor::analytic {

/// First two moments of the waiting time W (geometric on {0, 1, ...} with parameter p).
struct WaitingMoments {
  double mean = 0.0;
  double second = 0.0;
};

/// Every expectation entering the renewal-reward expression of the average AoI.
struct MomentBundle {
  double e_s = 0.0;   // E[S]
  double e_w = 0.0;   // E[W]
  double e_w2 = 0.0;  // E[W^2]
  double e_t = 0.0;   // E[T]
  double e_t2 = 0.0;  // E[T^2]
  double e_z = 0.0;   // E[Z] = E[W] + E[T]
  double e_z2 = 0.0;  // E[Z^2] = E[W^2] + 2 E[W] E[T] + E[T^2]
};

double expected_service_time(const SystemParams& params);

WaitingMoments expected_waiting_moments(double p);

/// Requires P2 < 1 (the P2/(1-P2) factor); finite at p == 1.
double expected_delivery_time(const SystemParams& params);

double expected_interdeparture(const SystemParams& params);

/// Interior points only: 0 < p < 1 and P2 < 1.
double expected_delivery_time_sq(const SystemParams& params);

/// All component moments at an interior point (0 < p < 1, P2 < 1).
MomentBundle moments(const SystemParams& params);

/// Closed-form time-average AoI of the cooperative protocol. Valid on (0, 1] in p;
/// equals 1/P1 at p == 1.
double average_aoi(const SystemParams& params);

/// E[S] + E[Z^2] / (2 E[Z]) - 1/2 built from the component moments. Interior points only.
double assembled_average_aoi(const SystemParams& params);

/// Direct-link-only system, the P2 -> 0 reduction of average_aoi: 1/p + 1/P1 - 1.
double average_aoi_noncooperative(double p, double p1);

/// Closed form without any validation, for callers that need a different precision.
template <typename Real>
Real average_aoi_unchecked(Real p, Real p1, Real p2, Real p3) {
  const Real one(1);
  const Real q = one - p;
  const Real numerator = (one - q * (one - p3)) * (one - q * (one - p1) * (one - p2));
  const Real denominator = p * (p * p1 + q * p3 - q * (one - p1) * (one - p2) * p3);
  return numerator / denominator;
}

}  // namespace aor::analytic
