#pragma once

#include <cstdint>
#include <optional>

namespace aor {

/// Slot index. Slot t covers the half-open interval [t, t+1).
using Slot = std::int64_t;

/// Per-slot transmission success probabilities of the three links.
struct LinkProbabilities {
  double p1 = 0.0;  // source -> destination
  double p2 = 0.0;  // source -> relay
  double p3 = 0.0;  // relay -> destination

  bool operator==(const LinkProbabilities&) const = default;
};

/// A full parameter point: links plus the per-slot update generation probability.
struct SystemParams {
  LinkProbabilities links;
  double p = 0.0;

  bool operator==(const SystemParams&) const = default;
};

/// Shorthand products shared by the moment formulas.
///
///   alpha    = (1-p)(1-P3)         probability the relay neither delivers nor is preempted
///   beta     = (1-p)(1-P1)(1-P2)   same for a source retransmission
///   gamma    = P2 P3 (1-p)(1-P1)
///   p_prime  = p / (1-p)           absent when p == 1
///   p2_prime = P2 / (1-P2)         absent when P2 == 1
struct DerivedConstants {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::optional<double> p_prime;
  std::optional<double> p2_prime;
};

/// Which node is responsible for the in-flight update.
enum class Holder { Idle, Source, Relay };

struct ProtocolState {
  Holder holder = Holder::Idle;
  Slot generation_slot = 0;  // meaningful unless holder == Idle
  Slot last_delivered_generation_slot = 0;

  bool operator==(const ProtocolState&) const = default;
};

/// Intervals of one inter-delivery cycle, in slots.
struct CycleRecord {
  std::int64_t s = 0;   // service time of the update delivered at the end of the cycle
  std::int64_t w = 0;   // waiting time from the previous delivery to the next generation
  std::int64_t t = 0;   // first generation after the previous delivery -> this delivery
  std::int64_t z = 0;   // interdeparture time, z == w + t
  double q = 0.0;       // AoI area over the cycle: s_prev*z + (z^2 - z)/2

  bool operator==(const CycleRecord&) const = default;
};

/// Throws Error(InvalidParameter) unless every probability lies in [0, 1].
void validate(const LinkProbabilities& links);
/// As above, additionally checking p in [0, 1].
void validate(const SystemParams& params);

DerivedConstants derive_constants(const SystemParams& params);

/// True iff 0 < P1 < P2 < 1 and 0 < P1 < P3 < 1, the region where the closed-form
/// optimum of the generation probability holds.
bool in_closed_form_domain(const LinkProbabilities& links);

}  // namespace aor
