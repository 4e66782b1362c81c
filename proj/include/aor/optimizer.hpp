#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aor/model.hpp"

namespace aor::optimizer {

/// Coefficients of kappa(p) = chi p^2 + psi p + omega, the numerator of dAoI/dp.
/// The denominator of the derivative is positive, so sign(kappa) == sign(dAoI/dp).
struct KappaCoefficients {
  double chi = 0.0;
  double psi = 0.0;
  double omega = 0.0;
  double discriminant = 0.0;  // psi^2 - 4 chi omega
};

enum class Branch { InteriorRoot, BoundaryOne };

struct OptimumResult {
  double p_star = 1.0;
  Branch branch = Branch::BoundaryOne;
  double aoi_at_optimum = 0.0;
  double threshold_p1 = 0.0;  // NaN when not computed (numerical path outside the domain)
};

/// Coefficients from the factored expressions, cross-checked against the fully expanded
/// polynomials. Throws OutOfDomain outside in_closed_form_domain().
KappaCoefficients kappa_coefficients(const LinkProbabilities& links);

/// Same coefficients from the expanded monomial sums only; no domain check.
KappaCoefficients expanded_kappa_coefficients(const LinkProbabilities& links);

/// Factored forms only; no domain check and no cross-check.
KappaCoefficients factored_kappa_coefficients(const LinkProbabilities& links);

/// Relative disagreement between two evaluations, |a - b| / max(|a|, |b|) (0 when both are 0).
double relative_difference(double a, double b);

double kappa(double p, const KappaCoefficients& coeffs);

/// Larger root of kappa, -2 omega / (psi + sqrt(disc)).
double interior_root(const KappaCoefficients& coeffs);

/// P1 value below which the optimum is interior; above it p* = 1.
double branch_threshold(double p2, double p3);

/// Closed-form optimum. Throws OutOfDomain outside in_closed_form_domain().
OptimumResult optimal_p(const LinkProbabilities& links);

/// Grid scan on [1e-4, 1] followed by golden-section refinement of the best bracket.
/// Works for any deliverable link triple.
OptimumResult numerical_optimal_p(const LinkProbabilities& links, double tolerance = 1e-10);

/// Outcome of the randomized check that chi < 0 with psi > 0 never occurs in the domain.
struct Case4Report {
  std::int64_t n_samples = 0;
  std::int64_t chi_pos_psi_pos = 0;
  std::int64_t chi_pos_psi_neg = 0;
  std::int64_t chi_neg_psi_neg = 0;
  std::int64_t chi_neg_psi_pos = 0;
  std::vector<std::string> counterexamples;  // empty on success

  bool ok() const { return counterexamples.empty(); }
};

/// Samples n_samples uniform link triples in the closed-form domain (rejection sampling)
/// and verifies the supporting facts of the chi/psi sign analysis for each one.
Case4Report case4_infeasibility_check(std::int64_t n_samples, std::uint64_t seed);

/// Coefficients of -chi as a quadratic in P1: lambda P1^2 + mu P1 + xi.
struct NegChiQuadratic {
  double lambda = 0.0;
  double mu = 0.0;
  double xi = 0.0;

  double operator()(double p1) const { return (lambda * p1 + mu) * p1 + xi; }
};

NegChiQuadratic neg_chi_quadratic(double p2, double p3);

/// Upper bound on P1 implied by psi > 0: P2 P3 / (1 - P3 + P2 P3).
double psi_positive_bound(double p2, double p3);

/// Uniform sample from the closed-form domain.
template <typename Rng>
LinkProbabilities sample_domain(Rng& rng);

}  // namespace aor::optimizer

#include "aor/detail/domain_sampler.hpp"
