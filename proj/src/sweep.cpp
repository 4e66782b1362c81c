#include "aor/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <omp.h>

#include "aor/analytic.hpp"
#include "aor/error.hpp"
#include "aor/simulator.hpp"
#include "aor/version.hpp"

namespace aor::sweep {

std::string_view to_string(Variable v) {
  switch (v) {
    case Variable::P1: return "p1";
    case Variable::P2: return "p2";
    case Variable::P3: return "p3";
    case Variable::P: return "p";
  }
  return "?";
}

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::CooperativeAnalytic: return "coop-analytic";
    case Mode::CooperativeSimulated: return "coop-sim";
    case Mode::NonCooperativeAnalytic: return "noncoop-analytic";
    case Mode::NonCooperativeSimulated: return "noncoop-sim";
  }
  return "?";
}

Variable parse_variable(std::string_view text) {
  for (Variable v : {Variable::P1, Variable::P2, Variable::P3, Variable::P}) {
    if (text == to_string(v)) return v;
  }
  if (text == "P1") return Variable::P1;
  if (text == "P2") return Variable::P2;
  if (text == "P3") return Variable::P3;
  fail(ErrorKind::InvalidParameter, fmt::format("unknown sweep variable '{}' (expected p, p1, p2 or p3)", text));
}

Mode parse_mode(std::string_view text) {
  for (Mode m : {Mode::CooperativeAnalytic, Mode::CooperativeSimulated, Mode::NonCooperativeAnalytic,
                 Mode::NonCooperativeSimulated}) {
    if (text == to_string(m)) return m;
  }
  fail(ErrorKind::InvalidParameter,
       fmt::format("unknown sweep mode '{}' (expected coop-analytic, coop-sim, noncoop-analytic or noncoop-sim)",
                   text));
}

bool is_simulated(Mode m) { return m == Mode::CooperativeSimulated || m == Mode::NonCooperativeSimulated; }

void validate(const SweepSpec& spec) {
  if (!(spec.start < spec.stop)) fail(ErrorKind::InvalidParameter, "sweep start must be below stop");
  if (!(spec.start >= 0.0 && spec.stop <= 1.0)) fail(ErrorKind::InvalidParameter, "sweep range must lie in [0, 1]");
  if (spec.variable == Variable::P && !(spec.start > 0.0)) {
    fail(ErrorKind::InvalidParameter, "p must be positive: sweep start must be above 0");
  }
  if (spec.steps < 2) fail(ErrorKind::InvalidParameter, "sweep steps must be at least 2");
  if (spec.modes.empty()) fail(ErrorKind::InvalidParameter, "at least one sweep mode is required");
  aor::validate(at(spec, spec.start));
  if (std::any_of(spec.modes.begin(), spec.modes.end(), is_simulated)) {
    sim::SimulationConfig probe;
    probe.params = at(spec, spec.start);
    probe.n_slots = spec.sim.n_slots;
    probe.n_replications = spec.sim.n_replications;
    probe.warmup_slots = spec.sim.warmup_slots;
    sim::validate(probe);
  }
  if (spec.variable != Variable::P && !(spec.fixed.p > 0.0)) fail(ErrorKind::InvalidParameter, "p must be positive");
}

std::vector<double> grid(const SweepSpec& spec) {
  std::vector<double> g(static_cast<std::size_t>(spec.steps));
  const double width = spec.stop - spec.start;
  for (int i = 0; i < spec.steps; ++i) g[static_cast<std::size_t>(i)] = spec.start + width * i / (spec.steps - 1);
  g.back() = spec.stop;
  return g;
}

SystemParams at(const SweepSpec& spec, double value) {
  SystemParams params = spec.fixed;
  switch (spec.variable) {
    case Variable::P1: params.links.p1 = value; break;
    case Variable::P2: params.links.p2 = value; break;
    case Variable::P3: params.links.p3 = value; break;
    case Variable::P: params.p = value; break;
  }
  return params;
}

namespace {

SweepRow evaluate(const SweepSpec& spec, double value, Mode mode) {
  SweepRow row;
  row.value = value;
  row.mode = mode;
  row.params = at(spec, value);

  const auto analytic_or_inf = [](auto&& f) {
    try {
      return f();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Undeliverable) throw;
      return std::numeric_limits<double>::infinity();
    }
  };

  switch (mode) {
    case Mode::CooperativeAnalytic:
      row.avg_aoi = analytic_or_inf([&] { return analytic::average_aoi(row.params); });
      return row;
    case Mode::NonCooperativeAnalytic:
      row.avg_aoi =
          analytic_or_inf([&] { return analytic::average_aoi_noncooperative(row.params.p, row.params.links.p1); });
      return row;
    case Mode::CooperativeSimulated:
    case Mode::NonCooperativeSimulated:
      break;
  }

  sim::SimulationConfig config;
  config.params = row.params;
  config.n_slots = spec.sim.n_slots;
  config.n_replications = spec.sim.n_replications;
  config.warmup_slots = spec.sim.warmup_slots;
  config.seed = spec.sim.seed;
  config.mode = mode == Mode::CooperativeSimulated ? sim::Mode::Cooperative : sim::Mode::NonCooperative;
  const sim::SimulationSummary summary = sim::run(config, 1);
  row.avg_aoi = summary.avg_aoi;
  row.std_error = summary.std_error;
  row.n_slots = config.n_slots;
  row.seed = config.seed;
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs) {
  validate(spec);
  std::vector<Mode> modes = spec.modes;
  std::sort(modes.begin(), modes.end());
  modes.erase(std::unique(modes.begin(), modes.end()), modes.end());

  const std::vector<double> values = grid(spec);
  const auto n_modes = static_cast<std::int64_t>(modes.size());
  const auto n_rows = static_cast<std::int64_t>(values.size()) * n_modes;
  std::vector<SweepRow> rows(static_cast<std::size_t>(n_rows));
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();

  // Exceptions must not escape the parallel region; capture the first one.
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t i = 0; i < n_rows; ++i) {
    try {
      rows[static_cast<std::size_t>(i)] =
          evaluate(spec, values[static_cast<std::size_t>(i / n_modes)], modes[static_cast<std::size_t>(i % n_modes)]);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvColumns << '\n';
  for (const SweepRow& r : rows) {
    const bool simulated = is_simulated(r.mode);
    const std::string aoi = simulated ? fmt::format("{:.6g}", r.avg_aoi) : fmt::format("{:.10g}", r.avg_aoi);
    const std::string se = r.std_error ? fmt::format("{:.6g}", *r.std_error) : std::string();
    const std::string slots = r.n_slots ? fmt::format("{}", *r.n_slots) : std::string();
    const std::string seed = r.seed ? fmt::format("{}", *r.seed) : std::string();
    out << fmt::format("{:.10g},{},{},{},{:.10g},{:.10g},{:.10g},{:.10g},{},{}\n", r.value, to_string(r.mode), aoi, se,
                       r.params.p, r.params.links.p1, r.params.links.p2, r.params.links.p3, slots, seed);
  }
}

std::string header_comment(const SweepSpec& spec) {
  std::string modes;
  for (Mode m : spec.modes) {
    if (!modes.empty()) modes += ';';
    modes += to_string(m);
  }
  return fmt::format(
      "# aor {} sweep var={} start={:.10g} stop={:.10g} steps={} p={:.10g} p1={:.10g} p2={:.10g} p3={:.10g} "
      "modes={} slots={} reps={} warmup={} seed={}",
      kVersion, to_string(spec.variable), spec.start, spec.stop, spec.steps, spec.fixed.p, spec.fixed.links.p1,
      spec.fixed.links.p2, spec.fixed.links.p3, modes, spec.sim.n_slots, spec.sim.n_replications,
      spec.sim.warmup_slots, spec.sim.seed);
}

}  // namespace aor::sweep
