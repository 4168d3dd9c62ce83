#include "aoisim/channel.hpp"

#include <stdexcept>
#include <utility>

namespace aoisim {

ChannelState::ChannelState(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw std::invalid_argument("channel capacity must be >= 1");
}

double ChannelState::load() const {
  return static_cast<double>(occupied()) / static_cast<double>(capacity_);
}

std::optional<ChannelState::Entry> ChannelState::try_enter(double now, double rate,
                                                           DelaySampler& delays) {
  if (occupied() >= capacity_) {
    ++drops_;
    return std::nullopt;
  }
  Entry e{next_ticket_++, now + delays.next(rate)};
  in_flight_.emplace(e.ticket, e.delivery_time);
  return e;
}

void ChannelState::deliver(std::uint64_t ticket) {
  auto it = in_flight_.find(ticket);
  if (it == in_flight_.end())
    throw std::logic_error("delivery of unknown channel ticket");
  in_flight_.erase(it);
}

EpochAdmission admit_epoch(ChannelState& ch, std::vector<Message> incoming,
                           double now, double rate, RngStream& lottery,
                           DelaySampler& delays) {
  // Fisher-Yates, then take the first `free` entries: uniform over subsets.
  for (std::size_t i = incoming.size(); i > 1; --i) {
    std::size_t j = lottery.next_below(static_cast<std::uint32_t>(i));
    std::swap(incoming[i - 1], incoming[j]);
  }
  EpochAdmission out;
  std::size_t take = std::min(incoming.size(), static_cast<std::size_t>(ch.free_paths()));
  out.admitted.reserve(take);
  for (std::size_t i = 0; i < incoming.size(); ++i) {
    if (i < take) {
      auto entry = ch.try_enter(now, rate, delays);
      // Cannot fail: take is bounded by free paths.
      out.admitted.push_back({incoming[i], entry->ticket, entry->delivery_time});
    } else {
      ch.count_drop();
      out.dropped.push_back(incoming[i]);
    }
  }
  out.load_after = ch.load();
  return out;
}

std::optional<AdmittedAck> admit_ack(ChannelState& ch, const Ack& ack, double now,
                                     double rate, DelaySampler& delays) {
  auto entry = ch.try_enter(now, rate, delays);
  if (!entry) return std::nullopt;
  return AdmittedAck{ack, entry->ticket, entry->delivery_time};
}

}  // namespace aoisim
