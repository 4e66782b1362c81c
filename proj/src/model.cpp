#include "aor/model.hpp"

#include <cmath>
#include <string>

#include "aor/error.hpp"

namespace aor {

namespace {

void check_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    fail(ErrorKind::InvalidParameter, std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

}  // namespace

void validate(const LinkProbabilities& links) {
  check_probability(links.p1, "p1");
  check_probability(links.p2, "p2");
  check_probability(links.p3, "p3");
}

void validate(const SystemParams& params) {
  validate(params.links);
  check_probability(params.p, "p");
}

DerivedConstants derive_constants(const SystemParams& params) {
  validate(params);
  const auto& [p1, p2, p3] = params.links;
  const double p = params.p;

  DerivedConstants c;
  c.alpha = (1.0 - p) * (1.0 - p3);
  c.beta = (1.0 - p) * (1.0 - p1) * (1.0 - p2);
  c.gamma = p2 * p3 * (1.0 - p) * (1.0 - p1);
  if (p < 1.0) c.p_prime = p / (1.0 - p);
  if (p2 < 1.0) c.p2_prime = p2 / (1.0 - p2);
  return c;
}

bool in_closed_form_domain(const LinkProbabilities& links) {
  const auto& [p1, p2, p3] = links;
  return 0.0 < p1 && p1 < p2 && p2 < 1.0 && p1 < p3 && p3 < 1.0;
}

}  // namespace aor
