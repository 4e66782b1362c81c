#include "aor/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "aor/analytic.hpp"
#include "aor/error.hpp"

namespace aor::optimizer {

namespace {

constexpr double kCoefficientAgreement = 1e-10;
constexpr double kBoundaryRootSnap = 1e-12;
constexpr double kGridLow = 1e-4;
constexpr int kGridIntervals = 1000;

void require_domain(const LinkProbabilities& links) {
  validate(links);
  if (!in_closed_form_domain(links)) {
    fail(ErrorKind::OutOfDomain,
         "links outside the closed-form domain (need 0 < p1 < p2 < 1 and 0 < p1 < p3 < 1); "
         "use numerical_optimal_p");
  }
}

bool near(double a, double b, double rel) {
  return std::abs(a - b) <= 1e-13 + rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace

double relative_difference(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

KappaCoefficients factored_kappa_coefficients(const LinkProbabilities& links) {
  const double p1 = links.p1;
  const double p2 = links.p2;
  const double p3 = links.p3;
  const double either = p1 + p2 - p1 * p2;  // 1 - (1-P1)(1-P2)

  KappaCoefficients k;
  k.chi = p2 * p3 * (1.0 - p2 * p3) - p1 * p1 * (1.0 - p2) * (1.0 - p3) * (1.0 - p3) -
          p1 * p2 * p3 * p3 * (1.0 - p2) * (2.0 - p1) - p1 * p2 * (1.0 - p3);
  k.psi = -2.0 * p3 * either * (p1 - p1 * p3 - p2 * p3 + p1 * p2 * p3);
  k.omega = -p3 * p3 * (p1 * p1 * (p2 - 1.0) * (p2 - 1.0) + p2 * (p2 + 2.0 * p1 * (1.0 - p2)));
  k.discriminant = 4.0 * p3 * p3 * p2 * (p3 - p1) * (1.0 - p1) * either * either;
  return k;
}

// Monomial sums are evaluated in extended precision; their cancellation would otherwise
// dominate the comparison against the factored forms.
KappaCoefficients expanded_kappa_coefficients(const LinkProbabilities& links) {
  using Real = long double;
  const Real p1 = links.p1;
  const Real p2 = links.p2;
  const Real p3 = links.p3;
  const Real a2 = p1 * p1, b2 = p2 * p2, c2 = p3 * p3;

  const Real chi = -(a2 * b2 * c2 - 2 * a2 * p2 * c2 + 2 * a2 * p2 * p3 - a2 * p2 + a2 * c2 - 2 * a2 * p3 + a2 -
                     2 * p1 * b2 * c2 + 2 * p1 * p2 * c2 - p1 * p2 * p3 + p1 * p2 + b2 * c2 - p2 * p3);
  const Real psi = 2 * a2 * b2 * c2 - 4 * a2 * p2 * c2 + 2 * a2 * p2 * p3 + 2 * a2 * c2 - 2 * a2 * p3 -
                   4 * p1 * b2 * c2 + 4 * p1 * p2 * c2 - 2 * p1 * p2 * p3 + 2 * b2 * c2;
  const Real omega = -(a2 * b2 * c2 - 2 * a2 * p2 * c2 + a2 * c2 - 2 * p1 * b2 * c2 + 2 * p1 * p2 * c2 + b2 * c2);

  KappaCoefficients k;
  k.chi = static_cast<double>(chi);
  k.psi = static_cast<double>(psi);
  k.omega = static_cast<double>(omega);
  k.discriminant = static_cast<double>(psi * psi - 4 * chi * omega);
  return k;
}

KappaCoefficients kappa_coefficients(const LinkProbabilities& links) {
  require_domain(links);
  const KappaCoefficients factored = factored_kappa_coefficients(links);
  const KappaCoefficients expanded = expanded_kappa_coefficients(links);

  const std::array<std::pair<const char*, std::pair<double, double>>, 4> pairs{{
      {"chi", {factored.chi, expanded.chi}},
      {"psi", {factored.psi, expanded.psi}},
      {"omega", {factored.omega, expanded.omega}},
      {"discriminant", {factored.discriminant, expanded.discriminant}},
  }};
  for (const auto& [name, values] : pairs) {
    if (relative_difference(values.first, values.second) > kCoefficientAgreement) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "kappa coefficient " << name << " disagrees between factored (" << values.first << ") and expanded ("
          << values.second << ") forms";
      throw std::logic_error(msg.str());
    }
  }
  return factored;
}

double kappa(double p, const KappaCoefficients& coeffs) { return (coeffs.chi * p + coeffs.psi) * p + coeffs.omega; }

double interior_root(const KappaCoefficients& coeffs) {
  return -2.0 * coeffs.omega / (coeffs.psi + std::sqrt(coeffs.discriminant));
}

double branch_threshold(double p2, double p3) {
  if (!(p2 > 0.0 && p2 < 1.0)) fail(ErrorKind::InvalidParameter, "branch threshold needs 0 < p2 < 1");
  if (!(p3 > 0.0 && p3 < 1.0)) fail(ErrorKind::InvalidParameter, "branch threshold needs 0 < p3 < 1");
  const double spread = p2 - p2 * p3;
  return (p2 + p2 * p3 - std::sqrt(spread * spread + 4.0 * p2 * p3)) / (2.0 * (p2 - 1.0));
}

OptimumResult optimal_p(const LinkProbabilities& links) {
  const KappaCoefficients coeffs = kappa_coefficients(links);

  OptimumResult r;
  r.threshold_p1 = branch_threshold(links.p2, links.p3);
  if (links.p1 < r.threshold_p1) {
    const double root = interior_root(coeffs);
    if (!(root > 0.0)) throw std::logic_error("interior root of kappa is not positive inside the domain");
    if (root < 1.0 - kBoundaryRootSnap) {
      r.p_star = root;
      r.branch = Branch::InteriorRoot;
    }
  }
  r.aoi_at_optimum = analytic::average_aoi({links, r.p_star});
  return r;
}

OptimumResult numerical_optimal_p(const LinkProbabilities& links, double tolerance) {
  validate(links);
  if (!(tolerance > 0.0)) fail(ErrorKind::InvalidParameter, "tolerance must be positive");
  // Rejects undeliverable links with the usual error.
  analytic::average_aoi({links, 1.0});
  analytic::average_aoi({links, 0.5});

  using Real = long double;
  const auto f = [&](double p) {
    return analytic::average_aoi_unchecked<Real>(p, links.p1, links.p2, links.p3);
  };

  const double step = (1.0 - kGridLow) / kGridIntervals;
  const auto grid = [&](int i) { return i == kGridIntervals ? 1.0 : kGridLow + step * i; };

  int best = 0;
  Real best_value = f(grid(0));
  for (int i = 1; i <= kGridIntervals; ++i) {
    const Real v = f(grid(i));
    if (v < best_value) {
      best = i;
      best_value = v;
    }
  }

  double lo = grid(std::max(best - 1, 0));
  double hi = grid(std::min(best + 1, kGridIntervals));

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  Real fc = f(c);
  Real fd = f(d);
  while (hi - lo > tolerance) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  double p_star = 0.5 * (lo + hi);
  if (f(1.0) <= f(p_star)) p_star = 1.0;

  OptimumResult r;
  r.p_star = p_star;
  r.branch = p_star == 1.0 ? Branch::BoundaryOne : Branch::InteriorRoot;
  r.aoi_at_optimum = analytic::average_aoi({links, p_star});
  r.threshold_p1 = (links.p2 > 0.0 && links.p2 < 1.0 && links.p3 > 0.0 && links.p3 < 1.0)
                       ? branch_threshold(links.p2, links.p3)
                       : std::numeric_limits<double>::quiet_NaN();
  return r;
}

NegChiQuadratic neg_chi_quadratic(double p2, double p3) {
  NegChiQuadratic q;
  q.lambda = p2 * p2 * p3 * p3 - 2.0 * p2 * p3 * p3 + 2.0 * p2 * p3 - p2 + p3 * p3 - 2.0 * p3 + 1.0;
  q.mu = 2.0 * p2 * p3 * p3 * (1.0 - p2) + p2 * (1.0 - p3);
  q.xi = p2 * p3 * (p2 * p3 - 1.0);
  return q;
}

double psi_positive_bound(double p2, double p3) { return p2 * p3 / (1.0 - p3 + p2 * p3); }

Case4Report case4_infeasibility_check(std::int64_t n_samples, std::uint64_t seed) {
  if (n_samples <= 0) fail(ErrorKind::InvalidParameter, "n_samples must be positive");

  Case4Report report;
  report.n_samples = n_samples;
  std::mt19937_64 rng(seed);

  auto flag = [&](const LinkProbabilities& l, const std::string& what) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "(p1=" << l.p1 << ", p2=" << l.p2 << ", p3=" << l.p3 << "): " << what;
    report.counterexamples.push_back(msg.str());
  };

  for (std::int64_t i = 0; i < n_samples; ++i) {
    const LinkProbabilities l = sample_domain(rng);
    const KappaCoefficients k = factored_kappa_coefficients(l);

    if (k.chi > 0.0) {
      ++(k.psi > 0.0 ? report.chi_pos_psi_pos : report.chi_pos_psi_neg);
    } else {
      ++(k.psi > 0.0 ? report.chi_neg_psi_pos : report.chi_neg_psi_neg);
    }

    if (k.chi < 0.0 && k.psi > 0.0) flag(l, "chi < 0 and psi > 0");
    if (!(k.omega < 0.0)) flag(l, "omega is not negative");
    if (!(k.discriminant > 0.0)) flag(l, "discriminant is not positive");

    const double bound = psi_positive_bound(l.p2, l.p3);
    if (k.psi > 0.0 && !(l.p1 < bound)) flag(l, "psi > 0 but p1 is not below the psi bound");

    const NegChiQuadratic q = neg_chi_quadratic(l.p2, l.p3);
    if (!(q.mu > 0.0)) flag(l, "mu is not positive");
    if (!(q.xi < 0.0)) flag(l, "xi is not negative");
    if (!near(q(l.p1), -k.chi, 1e-9)) flag(l, "-chi quadratic disagrees with chi");
    if (!near(q(1.0), (l.p3 - 1.0) * (l.p3 - 1.0), 1e-9)) flag(l, "-chi(1) != (p3-1)^2");

    const double at_bound = q(bound);
    const double s = l.p2 * l.p3 - l.p3 + 1.0;
    const double expected_at_bound = l.p2 * l.p3 * (l.p2 - 1.0) * (l.p3 - 1.0) * (l.p3 - 1.0) / (s * s);
    if (!(at_bound < 0.0)) flag(l, "-chi at the psi bound is not negative");
    if (!near(at_bound, expected_at_bound, 1e-9)) flag(l, "-chi at the psi bound disagrees with its closed form");
  }
  return report;
}

}  // namespace aor::optimizer
