#pragma once

#include <cstdint>
#include <queue>
#include <variant>
#include <vector>

#include "aoisim/channel.hpp"

namespace aoisim {

struct ForwardDelivery {
  Message msg;
  std::uint64_t ticket;
};

struct ReverseDelivery {
  Ack ack;
  std::uint64_t ticket;
};

struct EpochBoundary {
  int index;
};

using EventBody = std::variant<ForwardDelivery, ReverseDelivery, EpochBoundary>;

struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;  // tiebreak: insertion order
  EventBody body;
};

// Min-heap ordered by (time, seq). The clock follows popped events and can
// never go backwards; scheduling into the past is an error.
class EventQueue {
 public:
  void schedule(double time, EventBody body);
  Event pop();
  const Event& peek() const;
  bool empty() const { return heap_.empty(); }
  double clock() const { return clock_; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_ = 0;
  double clock_ = 0.0;
};

}  // namespace aoisim
