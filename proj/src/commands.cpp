#include "aor/commands.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "aor/analytic.hpp"
#include "aor/optimizer.hpp"
#include "aor/version.hpp"

namespace aor::cli {

namespace {

std::string analytic_value(double v) { return fmt::format("{:.10g}", v); }
std::string simulated_value(double v) { return fmt::format("{:.6g}", v); }

std::string_view mode_name(sim::Mode m) { return m == sim::Mode::Cooperative ? "coop" : "noncoop"; }

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
  return file;
}

void finish_output(std::ofstream& file, const std::string& path) {
  file.flush();
  if (!file) fail(ErrorKind::Io, "failed writing '" + path + "'");
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter:
    case ErrorKind::OutOfDomain:
      return kInvalidParameters;
    case ErrorKind::Undeliverable:
      return kUndeliverable;
    case ErrorKind::Io:
      return kIoFailure;
  }
  return kFailure;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kFailure;
  }
}

void cmd_analytic(const SystemParams& params, std::ostream& out) {
  const double aoi = analytic::average_aoi(params);
  out << "avg_aoi=" << analytic_value(aoi) << '\n';
  if (params.links.p1 > 0.0) {
    out << "avg_aoi_noncooperative=" << analytic_value(analytic::average_aoi_noncooperative(params.p, params.links.p1))
        << '\n';
  }
  out << "e_s=" << analytic_value(analytic::expected_service_time(params)) << '\n';
  const auto w = analytic::expected_waiting_moments(params.p);
  out << "e_w=" << analytic_value(w.mean) << '\n';
  out << "e_w2=" << analytic_value(w.second) << '\n';
  if (params.links.p2 < 1.0) out << "e_t=" << analytic_value(analytic::expected_delivery_time(params)) << '\n';
  out << "e_z=" << analytic_value(analytic::expected_interdeparture(params)) << '\n';
  if (params.p < 1.0 && params.links.p2 < 1.0) {
    const analytic::MomentBundle m = analytic::moments(params);
    out << "e_t2=" << analytic_value(m.e_t2) << '\n';
    out << "e_z2=" << analytic_value(m.e_z2) << '\n';
  }
}

std::string simulation_header(const sim::SimulationConfig& c) {
  return fmt::format("# aor {} simulate mode={} p={:.10g} p1={:.10g} p2={:.10g} p3={:.10g} slots={} reps={} warmup={} seed={}",
                     kVersion, mode_name(c.mode), c.params.p, c.params.links.p1, c.params.links.p2,
                     c.params.links.p3, c.n_slots, c.n_replications, c.warmup_slots, c.seed);
}

void cmd_simulate(sim::SimulationConfig config, int jobs, const std::string& cycles_path, std::ostream& out) {
  config.record_cycles = !cycles_path.empty();
  sim::validate(config);
  std::ofstream file;
  if (config.record_cycles) file = open_output(cycles_path);

  const sim::SimulationSummary s = sim::run(config, jobs);

  out << "mode=" << mode_name(config.mode) << '\n';
  out << "avg_aoi=" << simulated_value(s.avg_aoi) << '\n';
  out << "stderr=" << simulated_value(s.std_error) << '\n';
  out << "renewal_aoi=" << simulated_value(s.cycles.renewal_aoi) << '\n';
  out << "mean_s=" << simulated_value(s.mean_s) << '\n';
  out << "mean_w=" << simulated_value(s.mean_w) << '\n';
  out << "mean_t=" << simulated_value(s.mean_t) << '\n';
  out << "mean_z=" << simulated_value(s.mean_z) << '\n';
  out << "mean_z2=" << simulated_value(s.mean_z2) << '\n';
  out << "cov_s_z=" << simulated_value(s.cov_s_z) << '\n';
  out << "n_slots=" << s.n_slots << '\n';
  out << "n_cycles=" << s.n_cycles << '\n';
  out << "n_replications=" << s.n_replications << '\n';
  out << "seed=" << s.seed << '\n';

  if (config.record_cycles) {
    file << simulation_header(config) << '\n';
    file << "s,w,t,z,q\n";
    for (const CycleRecord& c : s.records) fmt::print(file, "{},{},{},{},{}\n", c.s, c.w, c.t, c.z, c.q);
    finish_output(file, cycles_path);
  }
}

void cmd_optimize(const LinkProbabilities& links, std::ostream& out) {
  validate(links);
  const bool closed_form = in_closed_form_domain(links);
  const optimizer::OptimumResult r = closed_form ? optimizer::optimal_p(links) : optimizer::numerical_optimal_p(links);

  out << "method=" << (closed_form ? "closed-form" : "numerical") << '\n';
  if (!closed_form) out << "note=outside closed-form domain (needs 0 < p1 < p2 < 1 and 0 < p1 < p3 < 1)\n";
  out << "p_star=" << analytic_value(r.p_star) << '\n';
  out << "branch=" << (r.branch == optimizer::Branch::InteriorRoot ? "interior" : "boundary") << '\n';
  out << "aoi=" << analytic_value(r.aoi_at_optimum) << '\n';
  if (!std::isnan(r.threshold_p1)) out << "threshold_p1=" << analytic_value(r.threshold_p1) << '\n';
}

void cmd_sweep(const sweep::SweepSpec& spec, int jobs, const std::string& path, std::ostream& out) {
  sweep::validate(spec);
  std::ofstream file;
  if (!path.empty()) file = open_output(path);

  const std::vector<sweep::SweepRow> rows = sweep::run_sweep(spec, jobs);
  std::ostream& sink = path.empty() ? out : file;
  sink << sweep::header_comment(spec) << '\n';
  sweep::write_csv(sink, rows);
  if (!path.empty()) finish_output(file, path);
}

int cmd_selftest(std::int64_t samples, std::uint64_t seed, std::ostream& out) {
  const optimizer::Case4Report report = optimizer::case4_infeasibility_check(samples, seed);
  out << "samples=" << report.n_samples << '\n';
  out << "chi>0,psi>0=" << report.chi_pos_psi_pos << '\n';
  out << "chi>0,psi<0=" << report.chi_pos_psi_neg << '\n';
  out << "chi<0,psi<0=" << report.chi_neg_psi_neg << '\n';
  out << "chi<0,psi>0=" << report.chi_neg_psi_pos << '\n';

  // Dual evaluation of the coefficients on an independent stream; throws on disagreement.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  double worst = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const LinkProbabilities links = optimizer::sample_domain(rng);
    optimizer::kappa_coefficients(links);
    const auto f = optimizer::factored_kappa_coefficients(links);
    const auto e = optimizer::expanded_kappa_coefficients(links);
    for (double d : {optimizer::relative_difference(f.chi, e.chi), optimizer::relative_difference(f.psi, e.psi),
                     optimizer::relative_difference(f.omega, e.omega),
                     optimizer::relative_difference(f.discriminant, e.discriminant)}) {
      worst = std::max(worst, d);
    }
  }
  out << "max_coefficient_disagreement=" << fmt::format("{:.3e}", worst) << '\n';

  for (const std::string& c : report.counterexamples) out << "counterexample: " << c << '\n';
  out << "result=" << (report.ok() ? "pass" : "fail") << '\n';
  return report.ok() ? kOk : kFailure;
}

}  // namespace aor::cli
