#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "aor/model.hpp"

namespace aor::sweep {

enum class Variable { P1, P2, P3, P };

/// Declaration order is the row order within one grid point.
enum class Mode { CooperativeAnalytic, CooperativeSimulated, NonCooperativeAnalytic, NonCooperativeSimulated };

struct SimulationSettings {
  std::int64_t n_slots = 10'000'000;
  std::int64_t n_replications = 1;
  std::int64_t warmup_slots = 10'000;
  std::uint64_t seed = 0;
};

struct SweepSpec {
  Variable variable = Variable::P1;
  double start = 0.0;
  double stop = 1.0;
  int steps = 2;
  SystemParams fixed;  // the swept coordinate is overwritten per grid point
  std::vector<Mode> modes;
  SimulationSettings sim;
};

struct SweepRow {
  double value = 0.0;
  Mode mode = Mode::CooperativeAnalytic;
  double avg_aoi = 0.0;  // +inf for undeliverable analytic points
  std::optional<double> std_error;
  SystemParams params;
  std::optional<std::int64_t> n_slots;
  std::optional<std::uint64_t> seed;
};

std::string_view to_string(Variable v);
std::string_view to_string(Mode m);
Variable parse_variable(std::string_view text);
Mode parse_mode(std::string_view text);
bool is_simulated(Mode m);

/// Throws Error(InvalidParameter) unless start < stop lie in the variable's range,
/// steps >= 2 and at least one mode is requested.
void validate(const SweepSpec& spec);

/// Evenly spaced points from start to stop inclusive.
std::vector<double> grid(const SweepSpec& spec);

SystemParams at(const SweepSpec& spec, double value);

/// One row per grid point per mode, ordered by (value, mode). Grid points run in
/// parallel; `jobs` <= 0 uses the runtime default.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs = 0);

inline constexpr std::string_view kCsvColumns = "variable_value,mode,avg_aoi,stderr,p,p1,p2,p3,n_slots,seed";

/// Writes the column line followed by one line per row. Analytic values use 10
/// significant digits, simulated ones 6.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// "# key=value ..." line describing the full effective sweep configuration.
std::string header_comment(const SweepSpec& spec);

}  // namespace aor::sweep
