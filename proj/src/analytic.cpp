#include "aor/analytic.hpp"

#include "aor/error.hpp"

namespace aor::analytic {

namespace {

void require_positive_p(double p) {
  if (!(p > 0.0)) fail(ErrorKind::InvalidParameter, "p must be positive");
}

void require_p2_below_one(const SystemParams& params) {
  if (!(params.links.p2 < 1.0)) {
    fail(ErrorKind::InvalidParameter, "p2 must be below 1 for the component moments; use average_aoi");
  }
}

// P1(1-alpha) + gamma: a sum of non-negative terms, zero exactly when no update is ever delivered.
double delivery_rate_term(const SystemParams& params, const DerivedConstants& c) {
  const double rate = params.links.p1 * (1.0 - c.alpha) + c.gamma;
  if (!(rate > 0.0)) fail(ErrorKind::Undeliverable, "undeliverable configuration: no link path can succeed");
  return rate;
}

}  // namespace

double expected_service_time(const SystemParams& params) {
  validate(params);
  require_positive_p(params.p);
  const DerivedConstants c = derive_constants(params);
  const double rate = delivery_rate_term(params, c);
  return 1.0 / (1.0 - c.beta) + (1.0 / (1.0 - c.alpha)) * (c.gamma / rate);
}

WaitingMoments expected_waiting_moments(double p) {
  if (!(p <= 1.0)) fail(ErrorKind::InvalidParameter, "p must lie in [0, 1]");
  require_positive_p(p);
  return {(1.0 - p) / p, (p * p - 3.0 * p + 2.0) / (p * p)};
}

double expected_delivery_time(const SystemParams& params) {
  validate(params);
  require_positive_p(params.p);
  require_p2_below_one(params);
  const DerivedConstants c = derive_constants(params);
  const double rate = delivery_rate_term(params, c);
  return ((1.0 - c.alpha) + c.beta * *c.p2_prime) / rate;
}

double expected_interdeparture(const SystemParams& params) {
  validate(params);
  require_positive_p(params.p);
  const DerivedConstants c = derive_constants(params);
  const double rate = delivery_rate_term(params, c);
  return (1.0 - c.alpha) * (1.0 - c.beta) / (params.p * rate);
}

double expected_delivery_time_sq(const SystemParams& params) {
  validate(params);
  require_positive_p(params.p);
  if (!(params.p < 1.0)) fail(ErrorKind::InvalidParameter, "p must be below 1 for E[T^2]; use average_aoi");
  require_p2_below_one(params);

  const DerivedConstants c = derive_constants(params);
  const double e_t = expected_delivery_time(params);
  const double a = c.alpha;
  const double b = c.beta;
  const double pp = *c.p_prime;
  const double p2p = *c.p2_prime;

  const double first = 1.0 / ((1.0 - a) * (1.0 - b) - (1.0 - a) * b * pp - b * pp * p2p);
  const double second = 1.0 / ((1.0 - a) * (1.0 - b));
  const double braced = (1.0 - a) * (1.0 - a) * (1.0 + b) + (3.0 - a - b - a * b) * b * p2p +
                        2.0 * e_t * ((1.0 - a) * (1.0 - a) * b * pp + (1.0 - a * b) * b * pp * p2p);
  return first * second * braced;
}

MomentBundle moments(const SystemParams& params) {
  MomentBundle m;
  m.e_t2 = expected_delivery_time_sq(params);  // strictest preconditions first
  m.e_s = expected_service_time(params);
  const WaitingMoments w = expected_waiting_moments(params.p);
  m.e_w = w.mean;
  m.e_w2 = w.second;
  m.e_t = expected_delivery_time(params);
  m.e_z = m.e_w + m.e_t;
  m.e_z2 = m.e_w2 + 2.0 * m.e_w * m.e_t + m.e_t2;
  return m;
}

double average_aoi(const SystemParams& params) {
  validate(params);
  require_positive_p(params.p);
  const DerivedConstants c = derive_constants(params);
  delivery_rate_term(params, c);
  const auto& [p1, p2, p3] = params.links;
  return average_aoi_unchecked(params.p, p1, p2, p3);
}

double assembled_average_aoi(const SystemParams& params) {
  const MomentBundle m = moments(params);
  return m.e_s + m.e_z2 / (2.0 * m.e_z) - 0.5;
}

double average_aoi_noncooperative(double p, double p1) {
  validate(SystemParams{{p1, 0.0, 0.0}, p});
  require_positive_p(p);
  if (!(p1 > 0.0)) fail(ErrorKind::Undeliverable, "undeliverable configuration: p1 must be positive without a relay");
  return (1.0 - (1.0 - p) * (1.0 - p1)) / (p * p1);
}

}  // namespace aor::analytic
