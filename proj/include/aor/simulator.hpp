#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aor/model.hpp"

namespace aor::sim {

enum class Mode { Cooperative, NonCooperative };

struct SimulationConfig {
  SystemParams params;
  std::int64_t n_slots = 10'000'000;
  std::int64_t n_replications = 1;
  std::uint64_t seed = 0;
  Mode mode = Mode::Cooperative;
  bool record_cycles = false;
  std::int64_t warmup_slots = 10'000;
};

/// Throws Error(InvalidParameter) on n_slots < 1, n_replications < 1,
/// warmup_slots outside [0, n_slots) or invalid probabilities.
void validate(const SimulationConfig& config);

/// Independent per-slot channel and arrival draws.
struct SlotOutcome {
  bool new_arrival = false;
  bool sd_success = false;
  bool sr_success = false;
  bool rd_success = false;
};

struct StepResult {
  ProtocolState state;
  std::optional<Slot> delivered;  // generation slot of the update delivered in this slot
};

/// One slot of the relaying protocol: arrival (replaces whatever is in flight, at source
/// or relay), then a single transmission by the current holder, then resolution.
/// A destination success wins over a simultaneous relay success.
StepResult step(const ProtocolState& state, const SlotOutcome& outcome, Slot slot);

/// Sample moments of the cycle intervals. Pair statistics use consecutive cycles
/// (S of cycle k-1 with Z of cycle k).
struct CycleStatistics {
  std::int64_t n_cycles = 0;
  std::int64_t n_pairs = 0;
  double mean_s = 0.0, se_s = 0.0;
  double mean_w = 0.0, se_w = 0.0;
  double mean_w2 = 0.0;
  double mean_t = 0.0, se_t = 0.0;
  double mean_t2 = 0.0;
  double mean_z = 0.0, se_z = 0.0;
  double mean_z2 = 0.0, se_z2 = 0.0;
  double mean_q = 0.0;
  double mean_s_prev = 0.0;     // E[S_{k-1}] over pairs
  double mean_z_pair = 0.0;     // E[Z_k] over pairs
  double mean_s_prev_z = 0.0;   // E[S_{k-1} Z_k]
  double cov_s_z = 0.0;         // E[S_{k-1} Z_k] - E[S_{k-1}] E[Z_k]
  double renewal_aoi = 0.0;     // mean_q / mean_z
};

/// Streaming form of cycle_statistics(); merge() combines independent streams.
class CycleAccumulator {
public:
  void add(const CycleRecord& record);
  /// Ends the current stream so the next record does not pair with the last one.
  void break_chain() { previous_s_.reset(); }
  void merge(const CycleAccumulator& other);
  CycleStatistics statistics() const;
  std::int64_t count() const { return n_; }

private:
  struct Moments {
    long double sum = 0, sum_sq = 0;
    void add(long double x) {
      sum += x;
      sum_sq += x * x;
    }
    void merge(const Moments& o) {
      sum += o.sum;
      sum_sq += o.sum_sq;
    }
  };

  std::int64_t n_ = 0;
  std::int64_t pairs_ = 0;
  Moments s_, w_, t_, z_, z2_;
  long double sum_q_ = 0;
  long double pair_s_ = 0, pair_z_ = 0, pair_sz_ = 0;
  std::optional<std::int64_t> previous_s_;
};

/// Throws Error(InvalidParameter) on fewer than two records.
CycleStatistics cycle_statistics(std::span<const CycleRecord> records);

struct SimulationSummary {
  double avg_aoi = 0.0;   // time-average of the per-slot AoI after warmup
  double std_error = 0.0; // across replications, or batch means for a single replication
  double mean_s = 0.0;
  double mean_w = 0.0;
  double mean_t = 0.0;
  double mean_z = 0.0;
  double mean_z2 = 0.0;
  double cov_s_z = 0.0;
  std::int64_t n_slots = 0;   // post-warmup slots summed over replications
  std::int64_t n_cycles = 0;
  std::int64_t n_replications = 0;
  std::uint64_t seed = 0;
  CycleStatistics cycles;
  std::vector<CycleRecord> records;  // filled when record_cycles is set, replication order
};

/// Number of contiguous batches used for the single-replication standard error.
inline constexpr int kBatchCount = 32;

SimulationSummary run_replication(const SimulationConfig& config, std::int64_t replication_index);

/// Runs all replications in parallel (OpenMP). `jobs` <= 0 uses the runtime default.
/// The result does not depend on the thread count.
SimulationSummary run(const SimulationConfig& config, int jobs = 0);

/// Serial reference for run(); produces bit-identical summaries.
SimulationSummary run_serial(const SimulationConfig& config);

}  // namespace aor::sim
