#include "aor/simulator.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <omp.h>

#include "aor/error.hpp"

namespace aor::sim {

void validate(const SimulationConfig& config) {
  aor::validate(config.params);
  if (config.n_slots < 1) fail(ErrorKind::InvalidParameter, "slots must be at least 1");
  if (config.n_replications < 1) fail(ErrorKind::InvalidParameter, "reps must be at least 1");
  if (config.warmup_slots < 0 || config.warmup_slots >= config.n_slots) {
    fail(ErrorKind::InvalidParameter, "warmup must lie in [0, slots)");
  }
}

StepResult step(const ProtocolState& state, const SlotOutcome& outcome, Slot slot) {
  StepResult r{state, std::nullopt};
  ProtocolState& s = r.state;

  if (outcome.new_arrival) {
    s.holder = Holder::Source;
    s.generation_slot = slot;
  }

  switch (s.holder) {
    case Holder::Idle:
      break;
    case Holder::Source:
      if (outcome.sd_success) {
        r.delivered = s.generation_slot;
      } else if (outcome.sr_success) {
        s.holder = Holder::Relay;
      }
      break;
    case Holder::Relay:
      if (outcome.rd_success) r.delivered = s.generation_slot;
      break;
  }

  if (r.delivered) {
    s.holder = Holder::Idle;
    s.last_delivered_generation_slot = *r.delivered;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Cycle statistics

void CycleAccumulator::add(const CycleRecord& c) {
  ++n_;
  s_.add(c.s);
  w_.add(c.w);
  t_.add(c.t);
  z_.add(c.z);
  z2_.add(static_cast<long double>(c.z) * c.z);
  sum_q_ += c.q;
  if (previous_s_) {
    ++pairs_;
    pair_s_ += *previous_s_;
    pair_z_ += c.z;
    pair_sz_ += static_cast<long double>(*previous_s_) * c.z;
  }
  previous_s_ = c.s;
}

void CycleAccumulator::merge(const CycleAccumulator& o) {
  n_ += o.n_;
  pairs_ += o.pairs_;
  s_.merge(o.s_);
  w_.merge(o.w_);
  t_.merge(o.t_);
  z_.merge(o.z_);
  z2_.merge(o.z2_);
  sum_q_ += o.sum_q_;
  pair_s_ += o.pair_s_;
  pair_z_ += o.pair_z_;
  pair_sz_ += o.pair_sz_;
  previous_s_.reset();
}

namespace {

struct MeanAndError {
  double mean;
  double se;
};

template <typename M>
MeanAndError mean_and_error(const M& m, std::int64_t n) {
  const long double mean = m.sum / n;
  if (n < 2) return {static_cast<double>(mean), std::numeric_limits<double>::quiet_NaN()};
  long double var = (m.sum_sq - n * mean * mean) / (n - 1);
  if (var < 0) var = 0;
  return {static_cast<double>(mean), static_cast<double>(std::sqrt(var / n))};
}

}  // namespace

CycleStatistics CycleAccumulator::statistics() const {
  CycleStatistics st;
  st.n_cycles = n_;
  st.n_pairs = pairs_;
  if (n_ == 0) return st;

  const auto s = mean_and_error(s_, n_);
  const auto w = mean_and_error(w_, n_);
  const auto t = mean_and_error(t_, n_);
  const auto z = mean_and_error(z_, n_);
  const auto z2 = mean_and_error(z2_, n_);
  st.mean_s = s.mean, st.se_s = s.se;
  st.mean_w = w.mean, st.se_w = w.se;
  st.mean_w2 = static_cast<double>(w_.sum_sq / n_);
  st.mean_t = t.mean, st.se_t = t.se;
  st.mean_t2 = static_cast<double>(t_.sum_sq / n_);
  st.mean_z = z.mean, st.se_z = z.se;
  st.mean_z2 = z2.mean, st.se_z2 = z2.se;
  st.mean_q = static_cast<double>(sum_q_ / n_);
  st.renewal_aoi = static_cast<double>(sum_q_ / z_.sum);

  if (pairs_ > 0) {
    const long double ms = pair_s_ / pairs_;
    const long double mz = pair_z_ / pairs_;
    const long double msz = pair_sz_ / pairs_;
    st.mean_s_prev = static_cast<double>(ms);
    st.mean_z_pair = static_cast<double>(mz);
    st.mean_s_prev_z = static_cast<double>(msz);
    st.cov_s_z = static_cast<double>(msz - ms * mz);
  }
  return st;
}

CycleStatistics cycle_statistics(std::span<const CycleRecord> records) {
  if (records.size() < 2) fail(ErrorKind::InvalidParameter, "cycle statistics need at least two records");
  CycleAccumulator acc;
  for (const CycleRecord& r : records) acc.add(r);
  return acc.statistics();
}

// ---------------------------------------------------------------------------
// Replications

namespace {

struct ReplicationResult {
  long double aoi_sum = 0;
  std::int64_t samples = 0;
  std::vector<double> batch_means;
  CycleAccumulator cycles;
  std::vector<CycleRecord> records;
};

std::mt19937_64 replication_engine(std::uint64_t seed, std::int64_t replication) {
  const auto rep = static_cast<std::uint64_t>(replication);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32)};
  return std::mt19937_64(seq);
}

ReplicationResult simulate(const SimulationConfig& config, std::int64_t replication) {
  const auto& [p1, p2, p3] = config.params.links;
  std::mt19937_64 engine = replication_engine(config.seed, replication);
  std::bernoulli_distribution arrival(config.params.p);
  std::bernoulli_distribution sd(p1);
  std::bernoulli_distribution sr(p2);
  std::bernoulli_distribution rd(p3);
  const bool cooperative = config.mode == Mode::Cooperative;

  ReplicationResult out;
  const std::int64_t measured = config.n_slots - config.warmup_slots;
  const std::int64_t batch_len = measured / kBatchCount;
  long double batch_sum = 0;
  std::int64_t batch_fill = 0;

  ProtocolState state;
  std::optional<Slot> previous_delivery;        // end-of-slot time of the last delivery
  std::optional<Slot> first_generation;         // first arrival since that delivery
  std::int64_t previous_service = 0;

  for (Slot t = 0; t < config.n_slots; ++t) {
    SlotOutcome o;
    o.new_arrival = arrival(engine);
    o.sd_success = sd(engine);
    o.sr_success = sr(engine);
    o.rd_success = rd(engine);
    if (!cooperative) o.sr_success = false;

    if (o.new_arrival && !first_generation) first_generation = t;

    const StepResult r = step(state, o, t);
    state = r.state;

    if (r.delivered) {
      const Slot delivery_time = t + 1;
      const std::int64_t service = delivery_time - *r.delivered;
      if (previous_delivery && *previous_delivery >= config.warmup_slots) {
        const Slot generated = first_generation.value_or(*r.delivered);
        CycleRecord c;
        c.s = service;
        c.w = generated - *previous_delivery;
        c.t = delivery_time - generated;
        c.z = delivery_time - *previous_delivery;
        c.q = static_cast<double>(previous_service) * c.z + 0.5 * static_cast<double>(c.z * c.z - c.z);
        out.cycles.add(c);
        if (config.record_cycles) out.records.push_back(c);
      }
      previous_delivery = delivery_time;
      previous_service = service;
      first_generation.reset();
    }

    if (t >= config.warmup_slots) {
      const std::int64_t age = (t + 1) - state.last_delivered_generation_slot;
      out.aoi_sum += age;
      ++out.samples;
      if (batch_len > 0 && static_cast<std::int64_t>(out.batch_means.size()) < kBatchCount) {
        batch_sum += age;
        // The last batch absorbs the remainder.
        const bool last = static_cast<std::int64_t>(out.batch_means.size()) == kBatchCount - 1;
        if (++batch_fill == batch_len && !last) {
          out.batch_means.push_back(static_cast<double>(batch_sum / batch_fill));
          batch_sum = 0;
          batch_fill = 0;
        }
      }
    }
  }
  if (batch_len > 0) out.batch_means.push_back(static_cast<double>(batch_sum / batch_fill));
  return out;
}

double standard_error(const std::vector<double>& xs) {
  const auto n = static_cast<double>(xs.size());
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  long double mean = 0;
  for (double x : xs) mean += x;
  mean /= n;
  long double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return static_cast<double>(std::sqrt(ss / (n - 1) / n));
}

SimulationSummary summarize(const SimulationConfig& config, std::vector<ReplicationResult>& reps) {
  SimulationSummary s;
  s.seed = config.seed;
  s.n_replications = static_cast<std::int64_t>(reps.size());

  long double total = 0;
  std::vector<double> rep_means;
  CycleAccumulator cycles;
  for (ReplicationResult& r : reps) {
    total += r.aoi_sum;
    s.n_slots += r.samples;
    rep_means.push_back(static_cast<double>(r.aoi_sum / r.samples));
    cycles.merge(r.cycles);
    if (config.record_cycles) {
      s.records.insert(s.records.end(), r.records.begin(), r.records.end());
    }
  }
  s.avg_aoi = static_cast<double>(total / s.n_slots);
  s.std_error = reps.size() >= 2 ? standard_error(rep_means) : standard_error(reps.front().batch_means);

  s.cycles = cycles.statistics();
  s.n_cycles = s.cycles.n_cycles;
  s.mean_s = s.cycles.mean_s;
  s.mean_w = s.cycles.mean_w;
  s.mean_t = s.cycles.mean_t;
  s.mean_z = s.cycles.mean_z;
  s.mean_z2 = s.cycles.mean_z2;
  s.cov_s_z = s.cycles.cov_s_z;
  return s;
}

}  // namespace

SimulationSummary run_replication(const SimulationConfig& config, std::int64_t replication_index) {
  validate(config);
  std::vector<ReplicationResult> reps;
  reps.push_back(simulate(config, replication_index));
  return summarize(config, reps);
}

SimulationSummary run(const SimulationConfig& config, int jobs) {
  validate(config);
  const std::int64_t n = config.n_replications;
  std::vector<ReplicationResult> reps(static_cast<std::size_t>(n));
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    reps[static_cast<std::size_t>(i)] = simulate(config, i);
  }
  return summarize(config, reps);
}

SimulationSummary run_serial(const SimulationConfig& config) {
  validate(config);
  std::vector<ReplicationResult> reps;
  for (std::int64_t i = 0; i < config.n_replications; ++i) reps.push_back(simulate(config, i));
  return summarize(config, reps);
}

}  // namespace aor::sim
