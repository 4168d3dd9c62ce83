#include "aoisim/events.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace aoisim {

void EventQueue::schedule(double time, EventBody body) {
  if (time < clock_)
    throw std::logic_error("event scheduled into the past: t=" + std::to_string(time) +
                           " clock=" + std::to_string(clock_));
  heap_.push(Event{time, next_seq_++, std::move(body)});
}

Event EventQueue::pop() {
  if (heap_.empty()) throw std::logic_error("pop from empty event queue");
  Event e = heap_.top();
  heap_.pop();
  clock_ = e.time;
  return e;
}

const Event& EventQueue::peek() const {
  if (heap_.empty()) throw std::logic_error("peek at empty event queue");
  return heap_.top();
}

}  // namespace aoisim
