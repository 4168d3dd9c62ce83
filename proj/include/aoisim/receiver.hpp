#pragma once

#include <optional>
#include <vector>

#include "aoisim/channel.hpp"

namespace aoisim {

// Tracks the true age process per agent. A message is applied only if its
// send time exceeds everything applied before; applied messages are
// acknowledged immediately, stale ones are discarded silently.
class Receiver {
 public:
  explicit Receiver(int n_agents);

  // Processes one arrival. Returns the ack for a fresh message, nothing for
  // a stale one.
  std::optional<Ack> on_message(const Message& msg, double arrival_time);

  // Age of agent n at time t: t minus the latest applied send time
  // (0 before any reception, so the age starts at 0 and grows at rate 1).
  double true_age(int agent, double t) const;

  double latest_applied_send(int agent) const { return per_agent_[agent].applied_send; }

  // (update time, measured age) pairs, in update order.
  const std::vector<std::pair<double, double>>& update_log(int agent) const {
    return per_agent_[agent].log;
  }

 private:
  struct PerAgent {
    double applied_send = 0.0;
    double last_update = 0.0;
    std::vector<std::pair<double, double>> log;
  };
  std::vector<PerAgent> per_agent_;
};

}  // namespace aoisim
