#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

#include "aor/error.hpp"
#include "aor/model.hpp"
#include "aor/simulator.hpp"
#include "aor/sweep.hpp"

// Subcommand bodies of the `aor` tool, kept out of main() so tests can drive them.
namespace aor::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // self-test found a counterexample, or an unexpected internal error
  kInvalidParameters = 2,
  kUndeliverable = 3,
  kIoFailure = 4,
};

int exit_code(ErrorKind kind);

/// Runs `body`, printing any error to `err` and translating it to an exit code.
int guarded(const std::function<int()>& body, std::ostream& err);

void cmd_analytic(const SystemParams& params, std::ostream& out);

/// Prints the summary; when `cycles_path` is non-empty also writes per-cycle records there.
void cmd_simulate(sim::SimulationConfig config, int jobs, const std::string& cycles_path, std::ostream& out);

void cmd_optimize(const LinkProbabilities& links, std::ostream& out);

/// Writes the sweep CSV to `path`, or to `out` when `path` is empty.
void cmd_sweep(const sweep::SweepSpec& spec, int jobs, const std::string& path, std::ostream& out);

/// Randomized verification of the optimizer's sign analysis. Returns kOk or kFailure.
int cmd_selftest(std::int64_t samples, std::uint64_t seed, std::ostream& out);

/// "# key=value ..." description of an effective simulation configuration.
std::string simulation_header(const sim::SimulationConfig& config);

}  // namespace aor::cli
