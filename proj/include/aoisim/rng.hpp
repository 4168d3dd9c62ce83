#pragma once

#include <cstdint>

namespace aoisim {

// Every random consumer in a run draws from its own substream, keyed by
// (master seed, consumer kind, agent, particle, message, context). Runs are
// therefore bit-identical for a fixed seed no matter how work is scheduled
// across threads, and filter resampling depends only on what was resampled,
// not on when.
enum class StreamKind : std::uint64_t {
  ForwardDelay = 1,  // C1 path delays, one stream per run
  ReverseDelay = 2,  // C2 path delays, one stream per run
  Admission = 3,     // admission lottery shuffle
  PolicyAction = 4,  // per-agent Bernoulli action draws
  FixedSelect = 5,   // ConstantRate per-epoch subset lottery
  FilterSim = 6,     // per-agent-per-particle candidate delivery draws
  Trainer = 7,       // optimizer population sampling
};

// Derives a substream state: seed mixed with each key slot through the
// splitmix64 finalizer. Documented key layout:
//   k1 = agent index, k2 = particle index, k3 = message index, k4 = context.
std::uint64_t derive_state(std::uint64_t seed, StreamKind kind,
                           std::uint64_t k1 = 0, std::uint64_t k2 = 0,
                           std::uint64_t k3 = 0, std::uint64_t k4 = 0);

// Small counter-based generator (splitmix64). 8 bytes of state, so a
// particle can afford to own one.
class RngStream {
 public:
  explicit RngStream(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64();

  // Uniform on the open interval (0,1); 52-bit resolution.
  double next_unit();

  // Exponential with rate `rate`, strictly positive.
  double next_exp(double rate);

  // Standard normal via Box-Muller.
  double next_gauss();

  // Uniform integer in [0, bound); bound >= 1.
  std::uint32_t next_below(std::uint32_t bound);

  bool bernoulli(double p);

 private:
  std::uint64_t state_;
};

// Factory for the per-consumer substreams of one run.
struct RngStreams {
  std::uint64_t seed = 0;

  RngStream forward_delays() const { return RngStream(derive_state(seed, StreamKind::ForwardDelay)); }
  RngStream reverse_delays() const { return RngStream(derive_state(seed, StreamKind::ReverseDelay)); }
  RngStream admission() const { return RngStream(derive_state(seed, StreamKind::Admission)); }
  RngStream policy_action(int agent) const {
    return RngStream(derive_state(seed, StreamKind::PolicyAction, static_cast<std::uint64_t>(agent)));
  }
  RngStream fixed_select() const { return RngStream(derive_state(seed, StreamKind::FixedSelect)); }
  RngStream trainer() const { return RngStream(derive_state(seed, StreamKind::Trainer)); }
};

// Context tag for a particle's initial candidate draw at send time; resample
// contexts use the bit pattern of the reset time instead (always >= 0, so the
// two can never collide).
inline constexpr std::uint64_t kSendContext = ~0ull;

std::uint64_t time_key(double t);

// One keyed exponential draw for a particle's candidate delivery delay.
// A pure function of (seed, agent, particle, message, context), which makes
// the belief state a function of the processed observation set rather than
// of the order observations happened to arrive in.
double filter_candidate_delay(std::uint64_t seed, int agent, int particle,
                              std::int64_t msg_index, std::uint64_t context,
                              double rate);

}  // namespace aoisim
