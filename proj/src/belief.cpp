#include "aoisim/belief.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aoisim {

int quantize(double x, int q) {
  if (x < 0.0) throw std::invalid_argument("cannot quantize a negative age");
  double f = std::floor(x);
  if (f >= static_cast<double>(q - 1)) return q - 1;
  return static_cast<int>(f);
}

std::optional<double> estimate_rate(const DelayEstimate& est) {
  if (est.count == 0) return std::nullopt;
  return static_cast<double>(est.count) / est.sum;
}

void Particle::insert_candidate(Candidate c) {
  auto pos = std::upper_bound(
      pending.begin(), pending.end(), c.delivery_time,
      [](double t, const Candidate& x) { return t < x.delivery_time; });
  pending.insert(pos, c);
}

ParticleSet::ParticleSet(std::uint64_t seed, int agent, int count, double forward_rate)
    : seed_(seed), agent_(agent), forward_rate_(forward_rate),
      particles_(static_cast<std::size_t>(count)) {}

void ParticleSet::note_send(std::int64_t msg_index, double send_time) {
  for (int p = 0; p < size(); ++p) {
    double d = filter_candidate_delay(seed_, agent_, p, msg_index, kSendContext,
                                      forward_rate_);
    particles_[static_cast<std::size_t>(p)].insert_candidate(
        {msg_index, send_time, send_time + d});
  }
}

void ParticleSet::advance(double t) {
  if (t < time_) throw std::logic_error("particle set advanced backwards");
  for (Particle& p : particles_) {
    std::size_t k = 0;
    while (k < p.pending.size() && p.pending[k].delivery_time <= t) {
      const Particle::Candidate& c = p.pending[k];
      if (c.send_time > p.applied_send) {
        p.anchor_time = c.delivery_time;
        p.anchor_value = c.delivery_time - c.send_time;
        p.applied_send = c.send_time;
      }
      ++k;
    }
    p.pending.erase(p.pending.begin(), p.pending.begin() + static_cast<std::ptrdiff_t>(k));
  }
  time_ = t;
}

void ParticleSet::apply_observation(double z, double rho, double now,
                                    const std::vector<SendRecord>& survivors) {
  std::uint64_t ctx = time_key(rho);
  for (int i = 0; i < size(); ++i) {
    Particle& p = particles_[static_cast<std::size_t>(i)];
    p.anchor_time = rho;
    p.anchor_value = z;
    p.applied_send = rho - z;
    p.pending.clear();
    for (const SendRecord& m : survivors) {
      // The observation proves a message sent before rho was still
      // undelivered at rho; memorylessness makes its residual delay a fresh
      // exponential from max(rho, send time).
      double from = std::max(rho, m.send_time);
      double d = filter_candidate_delay(seed_, agent_, i, m.index, ctx, forward_rate_);
      p.insert_candidate({m.index, m.send_time, from + d});
    }
    if (p.value_at(rho) != z) ++exactness_violations_;
  }
  latest_reset_time_ = rho;
  time_ = std::min(time_, rho);
  advance(now);
}

BeliefSummary ParticleSet::summary() const {
  double sum = 0.0, sum2 = 0.0;
  for (const Particle& p : particles_) {
    double v = p.value_at(time_);
    sum += v;
    sum2 += v * v;
  }
  double n = static_cast<double>(size());
  BeliefSummary s;
  s.mean = sum / n;
  s.stddev = std::sqrt(std::max(0.0, sum2 / n - s.mean * s.mean));
  return s;
}

std::vector<double> ParticleSet::values() const {
  std::vector<double> out;
  out.reserve(particles_.size());
  for (const Particle& p : particles_) out.push_back(p.value_at(time_));
  return out;
}

const SendRecord& AgentState::register_send(double send_time, bool admitted,
                                            double observed_load) {
  last_load_ = observed_load;
  SendRecord rec;
  rec.index = next_index_++;
  rec.send_time = send_time;
  rec.status = admitted ? MsgStatus::InFlight : MsgStatus::Dropped;
  send_log_.push_back(rec);
  if (admitted) ++unacked_;
  return send_log_.back();
}

AckOutcome AgentState::register_ack(const Ack& ack, double arrival) {
  double acked_send = ack.update_time - ack.age;
  SendRecord* match = nullptr;
  double best = 1e-6;
  for (SendRecord& rec : send_log_) {
    if (rec.status == MsgStatus::Dropped || rec.status == MsgStatus::Acked) continue;
    double diff = std::abs(rec.send_time - acked_send);
    if (diff < best) {
      best = diff;
      match = &rec;
    }
  }
  if (!match) throw std::logic_error("ack does not match any outstanding message");
  match->status = MsgStatus::Acked;
  --unacked_;
  ++acks_received_;
  delay_est_.add(arrival - ack.update_time);
  ack_history_.emplace_back(ack.update_time, ack.age);

  // Everything at or below the acknowledged send time lost the freshness
  // race for good.
  for (SendRecord& rec : send_log_) {
    if (rec.status == MsgStatus::InFlight && rec.send_time <= match->send_time)
      rec.status = MsgStatus::Superseded;
  }

  AckOutcome out;
  out.acked_send = match->send_time;
  out.dominating = ack.update_time >= latest_rho_;
  if (out.dominating) latest_rho_ = ack.update_time;
  return out;
}

std::vector<SendRecord> AgentState::live_messages() const {
  std::vector<SendRecord> out;
  for (const SendRecord& rec : send_log_)
    if (rec.status == MsgStatus::InFlight) out.push_back(rec);
  return out;
}

}  // namespace aoisim
