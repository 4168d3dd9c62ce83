#include "aoisim/receiver.hpp"

#include <stdexcept>

namespace aoisim {

Receiver::Receiver(int n_agents) : per_agent_(static_cast<std::size_t>(n_agents)) {}

std::optional<Ack> Receiver::on_message(const Message& msg, double arrival_time) {
  if (arrival_time < msg.send_time)
    throw std::logic_error("message arrival precedes its send time");
  PerAgent& a = per_agent_[static_cast<std::size_t>(msg.agent)];
  if (msg.send_time <= a.applied_send) return std::nullopt;  // stale
  a.applied_send = msg.send_time;
  a.last_update = arrival_time;
  double age = arrival_time - msg.send_time;
  a.log.emplace_back(arrival_time, age);
  return Ack{msg.agent, age, arrival_time};
}

double Receiver::true_age(int agent, double t) const {
  return t - per_agent_[static_cast<std::size_t>(agent)].applied_send;
}

}  // namespace aoisim
