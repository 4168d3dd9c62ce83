#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "aoisim/channel.hpp"
#include "aoisim/rng.hpp"

namespace aoisim {

// Quantization level of an age value: min(floor(x), q-1), i.e. buckets
// [0,1), [1,2), ..., [q-1, inf). Negative input is rejected.
int quantize(double x, int q);

struct BeliefSummary {
  double mean = 0.0;
  double stddev = 0.0;  // population form, divisor P
};

// Reverse-delay samples and their exponential MLE rate, count/sum.
struct DelayEstimate {
  std::int64_t count = 0;
  double sum = 0.0;

  void add(double sample) {
    ++count;
    sum += sample;
  }
};

// No estimate until at least one sample exists.
std::optional<double> estimate_rate(const DelayEstimate& est);

enum class MsgStatus : std::uint8_t {
  InFlight,    // admitted, no ack yet, could still be applied by the receiver
  Dropped,     // never entered the channel
  Acked,       // ack received
  Superseded,  // a later send was acknowledged first; can never be applied
};

struct SendRecord {
  std::int64_t index = 0;
  double send_time = 0.0;
  MsgStatus status = MsgStatus::InFlight;
};

// One simulated age trajectory. Between applied candidate deliveries the
// value grows at rate 1 from the anchor; the pending schedule is kept sorted
// by delivery time.
struct Particle {
  double anchor_time = 0.0;
  double anchor_value = 0.0;
  double applied_send = 0.0;  // freshness watermark within this trajectory

  struct Candidate {
    std::int64_t msg_index;
    double send_time;
    double delivery_time;
  };
  std::vector<Candidate> pending;

  double value_at(double t) const { return anchor_value + (t - anchor_time); }
  void insert_candidate(Candidate c);
};

// Uniform-weight particle set over one agent's age. Observations are exact,
// so an update resets every trajectory to the observed point and re-simulates
// forward; weights stay 1/P throughout.
class ParticleSet {
 public:
  ParticleSet(std::uint64_t seed, int agent, int count, double forward_rate);

  double time() const { return time_; }
  int size() const { return static_cast<int>(particles_.size()); }
  const std::vector<Particle>& particles() const { return particles_; }
  std::vector<Particle>& particles_mut() { return particles_; }
  double latest_reset_time() const { return latest_reset_time_; }

  // Count of particles that failed to pass exactly through an observation
  // point at the moment of its reset. Zero unless the rewrite is broken.
  std::int64_t exactness_violations() const { return exactness_violations_; }

  // Each particle draws an independent candidate delivery at
  // send_time + Exp(lambda1) for the newly admitted message.
  void note_send(std::int64_t msg_index, double send_time);

  // Applies pending candidate deliveries up to t in time order (freshness
  // rule mirrors the receiver), then ages every trajectory to t.
  void advance(double t);

  // Back-propagation for an exact observation (age z at receiver time rho):
  // every trajectory is rewritten to pass through (rho, z); surviving
  // messages get fresh candidate deliveries at max(rho, send) + Exp(lambda1);
  // then the set re-simulates to `now`. Draws are keyed by (message, rho), so
  // the result depends only on the processed observation, not on arrival
  // order. Survivors must be exactly the unacknowledged admitted messages
  // with send time greater than rho - z.
  void apply_observation(double z, double rho, double now,
                         const std::vector<SendRecord>& survivors);

  BeliefSummary summary() const;
  std::vector<double> values() const;

 private:
  std::uint64_t seed_;
  int agent_;
  double forward_rate_;
  double time_ = 0.0;
  double latest_reset_time_ = -1.0;
  std::int64_t exactness_violations_ = 0;
  std::vector<Particle> particles_;
};

// What an ack resolved to on the agent side.
struct AckOutcome {
  double acked_send = 0.0;
  bool dominating = false;  // carries the newest receiver information
};

// Sender-side ledger: send log, unacknowledged count, last observed channel
// load, ack history and reverse-delay samples. The unacknowledged count
// changes only on admission (+1) and ack reception (-1).
class AgentState {
 public:
  explicit AgentState(int index) : index_(index) {}

  int index() const { return index_; }
  int unacked() const { return unacked_; }
  double last_observed_load() const { return last_load_; }
  int acks_received() const { return acks_received_; }
  const DelayEstimate& reverse_delay() const { return delay_est_; }
  const std::vector<SendRecord>& send_log() const { return send_log_; }
  double latest_rho() const { return latest_rho_; }
  const std::vector<std::pair<double, double>>& ack_history() const { return ack_history_; }

  std::int64_t next_message_index() const { return next_index_; }

  // Records a send attempt and the observed post-admission load. Admitted
  // messages raise the unacknowledged count; drops are only logged.
  const SendRecord& register_send(double send_time, bool admitted, double observed_load);

  // Books an ack received at `arrival`: resolves it to the acknowledged
  // message (error if none matches), decrements the unacknowledged count,
  // stores the reverse-delay sample and the (rho, z) pair, and marks every
  // in-flight message at or below the acknowledged send time as superseded.
  AckOutcome register_ack(const Ack& ack, double arrival);

  // Messages a fresh observation keeps alive: in flight and fresher than the
  // acknowledged send.
  std::vector<SendRecord> live_messages() const;

 private:
  int index_;
  std::vector<SendRecord> send_log_;
  std::int64_t next_index_ = 1;
  int unacked_ = 0;
  double last_load_ = 0.0;
  double latest_rho_ = -1.0;
  int acks_received_ = 0;
  DelayEstimate delay_est_;
  std::vector<std::pair<double, double>> ack_history_;  // (rho, z), insertion order
};

}  // namespace aoisim
