// Command-line front end: analytic, simulate, optimize, sweep, selftest.

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "aor/commands.hpp"
#include "aor/error.hpp"
#include "aor/version.hpp"

namespace {

struct Flags {
  double p = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
  std::uint64_t seed = 0;
  std::int64_t slots = 10'000'000;
  std::int64_t reps = 1;
  std::int64_t warmup = 10'000;
  int jobs = 0;
  std::string out;
  std::string mode = "coop";
  std::string var = "p1";
  double start = 0.0;
  double stop = 1.0;
  int steps = 2;
  std::vector<std::string> modes{"coop-analytic", "noncoop-analytic"};
  std::int64_t samples = 100'000;
};

void add_link_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--p1", f.p1, "S->D per-slot success probability");
  cmd->add_option("--p2", f.p2, "S->R per-slot success probability");
  cmd->add_option("--p3", f.p3, "R->D per-slot success probability");
}

// Parameters are required only where the computation reads them: the relay
// links are unused by the non-cooperative baseline, and a swept variable
// comes from the grid.
void require_flags(const CLI::App* cmd, const std::vector<std::string>& names) {
  for (const auto& name : names)
    if (cmd->count("--" + name) == 0) throw aor::Error(aor::ErrorKind::InvalidParameter, "--" + name + " is required");
}

void add_sim_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--seed", f.seed, "master RNG seed")->capture_default_str();
  cmd->add_option("--slots", f.slots, "slots per replication")->capture_default_str();
  cmd->add_option("--reps", f.reps, "independent replications")->capture_default_str();
  cmd->add_option("--warmup", f.warmup, "slots excluded from averages")->capture_default_str();
  cmd->add_option("--jobs", f.jobs, "worker threads (0: all available)")->capture_default_str();
}

aor::SystemParams params(const Flags& f) { return {{f.p1, f.p2, f.p3}, f.p}; }

bool flag_given(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args)
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  return false;
}

// Subcommand config files are not read by CLI11 itself, so their entries are
// spliced into the argument list ahead of any flag the user did not give.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.size() < 2) return args;
  std::vector<std::string> injected;
  for (const auto& item : CLI::ConfigINI{}.from_file(path)) {
    if (item.name == "++" || item.name == "--") continue;
    const std::string flag = "--" + item.name;
    if (flag_given(args, flag)) continue;
    injected.push_back(flag);
    injected.insert(injected.end(), item.inputs.begin(), item.inputs.end());
  }
  args.insert(args.begin() + 2, injected.begin(), injected.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Age of information under opportunistic relaying with preemption"};
  app.set_version_flag("--version", aor::kVersion);
  app.require_subcommand(1);
  Flags f;
  std::string config_path;

  auto* analytic = app.add_subcommand("analytic", "closed-form average AoI and component moments");
  analytic->add_option("--config", config_path, "key = value file; command-line flags take precedence");
  analytic->add_option("--p", f.p, "update generation probability")->required();
  add_link_flags(analytic, f);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation of the protocol");
  simulate->add_option("--config", config_path, "key = value file; command-line flags take precedence");
  simulate->add_option("--p", f.p, "update generation probability")->required();
  add_link_flags(simulate, f);
  add_sim_flags(simulate, f);
  simulate->add_option("--mode", f.mode, "coop or noncoop")
      ->check(CLI::IsMember({"coop", "noncoop"}))
      ->capture_default_str();
  simulate->add_option("--out", f.out, "write per-cycle records (s,w,t,z,q) to this CSV file");

  auto* optimize = app.add_subcommand("optimize", "optimal update generation probability");
  optimize->add_option("--config", config_path, "key = value file; command-line flags take precedence");
  add_link_flags(optimize, f);

  auto* sweep = app.add_subcommand("sweep", "parameter sweep written as CSV");
  sweep->add_option("--config", config_path, "key = value file; command-line flags take precedence");
  sweep->add_option("--var", f.var, "swept variable: p, p1, p2 or p3")->capture_default_str();
  sweep->add_option("--start", f.start, "first grid value")->required();
  sweep->add_option("--stop", f.stop, "last grid value")->required();
  sweep->add_option("--steps", f.steps, "number of grid points")->required();
  sweep->add_option("--modes", f.modes, "coop-analytic, coop-sim, noncoop-analytic, noncoop-sim")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--p", f.p, "generation probability (ignored when swept)");
  add_link_flags(sweep, f);
  add_sim_flags(sweep, f);
  sweep->add_option("--out", f.out, "CSV output path (default: stdout)");

  auto* selftest = app.add_subcommand("selftest", "randomized check of the optimizer's coefficient sign analysis");
  selftest->add_option("--samples", f.samples, "domain samples")->capture_default_str();
  selftest->add_option("--seed", f.seed, "RNG seed")->capture_default_str();

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args.insert(args.begin(), argv[0]);
    args = expand_config(std::move(args));
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return aor::cli::kIoFailure;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return aor::cli::kInvalidParameters;
  }

  auto sim_config = [&](aor::sim::Mode mode) {
    aor::sim::SimulationConfig c;
    c.params = params(f);
    c.n_slots = f.slots;
    c.n_replications = f.reps;
    c.warmup_slots = f.warmup;
    c.seed = f.seed;
    c.mode = mode;
    return c;
  };

  return aor::cli::guarded(
      [&]() -> int {
        if (analytic->parsed()) {
          require_flags(analytic, {"p1", "p2", "p3"});
          aor::cli::cmd_analytic(params(f), std::cout);
        } else if (simulate->parsed()) {
          const auto mode = f.mode == "coop" ? aor::sim::Mode::Cooperative : aor::sim::Mode::NonCooperative;
          require_flags(simulate, mode == aor::sim::Mode::Cooperative ? std::vector<std::string>{"p1", "p2", "p3"}
                                                                      : std::vector<std::string>{"p1"});
          aor::cli::cmd_simulate(sim_config(mode), f.jobs, f.out, std::cout);
        } else if (optimize->parsed()) {
          require_flags(optimize, {"p1", "p2", "p3"});
          aor::cli::cmd_optimize({f.p1, f.p2, f.p3}, std::cout);
        } else if (sweep->parsed()) {
          aor::sweep::SweepSpec spec;
          spec.variable = aor::sweep::parse_variable(f.var);
          spec.start = f.start;
          spec.stop = f.stop;
          spec.steps = f.steps;
          spec.fixed = params(f);
          for (const std::string& m : f.modes) spec.modes.push_back(aor::sweep::parse_mode(m));
          const bool cooperative = std::any_of(spec.modes.begin(), spec.modes.end(), [](aor::sweep::Mode m) {
            return m == aor::sweep::Mode::CooperativeAnalytic || m == aor::sweep::Mode::CooperativeSimulated;
          });
          std::vector<std::string> needed{"p", "p1"};
          if (cooperative) needed.insert(needed.end(), {"p2", "p3"});
          const std::string swept{aor::sweep::to_string(spec.variable)};
          std::erase(needed, swept);
          require_flags(sweep, needed);
          spec.sim = {f.slots, f.reps, f.warmup, f.seed};
          aor::cli::cmd_sweep(spec, f.jobs, f.out, std::cout);
        } else if (selftest->parsed()) {
          return aor::cli::cmd_selftest(f.samples, f.seed, std::cout);
        }
        return aor::cli::kOk;
      },
      std::cerr);
}
