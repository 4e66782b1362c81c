#pragma once

#include <random>

namespace aor::optimizer {

template <typename Rng>
LinkProbabilities sample_domain(Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    LinkProbabilities links{unit(rng), unit(rng), unit(rng)};
    if (in_closed_form_domain(links)) return links;
  }
}

}  // namespace aor::optimizer
