#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "aoisim/rng.hpp"

namespace aoisim {

// Sensor-to-receiver wire record.
struct Message {
  int agent = 0;
  std::int64_t index = 0;  // per-agent, strictly increasing with send time
  double send_time = 0.0;
};

// Receiver-to-sensor wire record: updated age and the receiver update time.
struct Ack {
  int agent = 0;
  double age = 0.0;          // z
  double update_time = 0.0;  // eta
};

// Delay source for a channel: a seeded stream, optionally preceded by a
// scripted sequence (consumed first; used by replay-style tests).
class DelaySampler {
 public:
  explicit DelaySampler(RngStream stream) : stream_(stream) {}
  DelaySampler(RngStream stream, const std::vector<double>& script)
      : stream_(stream), script_(script.begin(), script.end()) {}

  double next(double rate) {
    if (!script_.empty()) {
      double d = script_.front();
      script_.pop_front();
      return d;
    }
    return stream_.next_exp(rate);
  }

 private:
  RngStream stream_;
  std::deque<double> script_;
};

// A bank of C anonymous single-message paths. Only the occupied count and
// the set of outstanding tickets matter; payloads ride on the event queue.
class ChannelState {
 public:
  explicit ChannelState(int capacity);

  int capacity() const { return capacity_; }
  int occupied() const { return static_cast<int>(in_flight_.size()); }
  int free_paths() const { return capacity_ - occupied(); }
  double load() const;  // occupied / capacity, in [0,1]
  std::int64_t drops() const { return drops_; }

  // Claims a path; delivery at now + Exp(rate). Returns the ticket and the
  // scheduled delivery time, or nothing (and counts a drop) when full.
  struct Entry {
    std::uint64_t ticket;
    double delivery_time;
  };
  std::optional<Entry> try_enter(double now, double rate, DelaySampler& delays);

  // Releases the path held by `ticket`. Unknown tickets are an internal error.
  void deliver(std::uint64_t ticket);

  void count_drop() { ++drops_; }

 private:
  int capacity_;
  std::uint64_t next_ticket_ = 1;
  std::unordered_map<std::uint64_t, double> in_flight_;  // ticket -> delivery
  std::int64_t drops_ = 0;
};

struct AdmittedMessage {
  Message msg;
  std::uint64_t ticket = 0;
  double delivery_time = 0.0;
};

struct EpochAdmission {
  std::vector<AdmittedMessage> admitted;
  std::vector<Message> dropped;
  double load_after = 0.0;  // what every sender observes
};

// Admits min(|incoming|, free) messages, chosen uniformly over subsets via a
// seeded shuffle; the rest are dropped and counted. Called once per epoch.
EpochAdmission admit_epoch(ChannelState& ch, std::vector<Message> incoming,
                           double now, double rate, RngStream& lottery,
                           DelaySampler& delays);

struct AdmittedAck {
  Ack ack;
  std::uint64_t ticket = 0;
  double delivery_time = 0.0;
};

// Admits one ack at its continuous arrival time, or drops it when the
// channel is full (no retransmit).
std::optional<AdmittedAck> admit_ack(ChannelState& ch, const Ack& ack,
                                     double now, double rate,
                                     DelaySampler& delays);

}  // namespace aoisim
