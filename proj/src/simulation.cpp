#include "aoisim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "aoisim/belief.hpp"
#include "aoisim/events.hpp"
#include "aoisim/receiver.hpp"

namespace aoisim {
namespace {

// Ground-truth per-agent message accounting, used for observations and the
// conservation checks. Every admitted message is in exactly one bucket:
// in C1, delivered stale, ack in C2, ack dropped at C2, or ack delivered.
struct AgentTruth {
  int in_c1 = 0;
  int stale_delivered = 0;
  int acks_in_c2 = 0;
  int acks_dropped_c2 = 0;
  int acks_delivered = 0;
  double last_admitted_send = 0.0;
};

class Simulation {
 public:
  Simulation(const SimConfig& cfg, const PolicySpec& policy, ObsModel model,
             ObsVariant variant, std::uint64_t seed, const RunOptions& opts)
      : cfg_(cfg),
        policy_(policy),
        model_(model),
        variant_(variant),
        opts_(opts),
        streams_{seed},
        horizon_(opts.horizon > 0 ? opts.horizon : cfg.eval_epochs),
        use_filters_(opts.maintain_filters || variant == ObsVariant::AvgBelief ||
                     model == ObsModel::NAgentDecParticles || opts.trace_agent >= 0),
        c1_(cfg.paths),
        c2_(cfg.paths),
        receiver_(cfg.n_agents),
        forward_delays_(opts.forward_delay_script
                            ? DelaySampler(streams_.forward_delays(), *opts.forward_delay_script)
                            : DelaySampler(streams_.forward_delays())),
        reverse_delays_(opts.reverse_delay_script
                            ? DelaySampler(streams_.reverse_delays(), *opts.reverse_delay_script)
                            : DelaySampler(streams_.reverse_delays())),
        admission_(streams_.admission()),
        fixed_select_(streams_.fixed_select()) {
    if (model_ == ObsModel::NAgentDecParticles && variant_ == ObsVariant::TrueState)
      throw std::invalid_argument("the particles model is belief-based; use avg-belief");
    agents_.reserve(static_cast<std::size_t>(cfg.n_agents));
    truth_.resize(static_cast<std::size_t>(cfg.n_agents));
    for (int n = 0; n < cfg.n_agents; ++n) {
      agents_.emplace_back(n);
      action_streams_.push_back(streams_.policy_action(n));
      if (use_filters_)
        filters_.emplace_back(seed, n, cfg.particles, cfg.lambda1);
    }
  }

  EpisodeMetrics run() {
    EpisodeMetrics m;
    const int steps = horizon_ + 1;
    m.avg_age.reserve(static_cast<std::size_t>(steps));
    m.cum_drops_per_agent.reserve(static_cast<std::size_t>(steps));
    m.c1_load.reserve(static_cast<std::size_t>(steps));
    m.rewards.reserve(static_cast<std::size_t>(steps));

    for (int t = 0; t <= horizon_; ++t)
      queue_.schedule(static_cast<double>(t) * cfg_.dt, EpochBoundary{t});

    for (int t = 0; t <= horizon_; ++t) {
      const double now = static_cast<double>(t) * cfg_.dt;
      advance_to_boundary(t, m);
      if (use_filters_)
        for (ParticleSet& f : filters_) f.advance(now);

      // Epoch sample: ages and loads as of the boundary instant. Actions
      // taken below cannot affect them (delays are strictly positive).
      SystemSnapshot snap = snapshot(now);
      double mean_age =
          std::accumulate(snap.true_age.begin(), snap.true_age.end(), 0.0) /
          static_cast<double>(cfg_.n_agents);
      m.avg_age.push_back(mean_age);
      m.c1_load.push_back(snap.channel_load);
      record_diagnostics(now, snap, m);

      std::vector<std::uint8_t> actions = decide(snap, t);
      std::int64_t drops = admit_and_send(actions, now, m);
      m.cum_drops_per_agent.push_back(static_cast<double>(c1_.drops()) /
                                      static_cast<double>(cfg_.n_agents));
      m.rewards.push_back(reward(snap.true_age, drops, cfg_.drop_penalty));

      if (opts_.validate_invariants) check_invariants(now);
    }

    m.episode_return = std::accumulate(m.rewards.begin(), m.rewards.end(), 0.0);
    m.time_avg_age = std::accumulate(m.avg_age.begin(), m.avg_age.end(), 0.0) /
                     static_cast<double>(steps);
    for (const ParticleSet& f : filters_)
      m.reset_exactness_violations += f.exactness_violations();
    m.c1_drops = c1_.drops();
    m.c2_ack_drops = c2_.drops();
    const double end = static_cast<double>(horizon_) * cfg_.dt;
    for (int n = 0; n < cfg_.n_agents; ++n)
      m.final_age.push_back(receiver_.true_age(n, end));
    double rate_sum = 0.0;
    int rate_count = 0;
    for (const AgentState& a : agents_)
      if (auto r = estimate_rate(a.reverse_delay())) {
        rate_sum += *r;
        ++rate_count;
      }
    m.mean_reverse_rate_estimate = rate_count ? rate_sum / rate_count : 0.0;
    return m;
  }

 private:
  void advance_to_boundary(int index, EpisodeMetrics& m) {
    const int substeps = opts_.belief_error_substeps;
    if (index > 0 && opts_.collect_belief_error && use_filters_ && substeps > 1) {
      for (int k = 1; k < substeps; ++k) {
        double s = (static_cast<double>(index - 1) +
                    static_cast<double>(k) / static_cast<double>(substeps)) *
                   cfg_.dt;
        while (!queue_.empty() && queue_.peek().time <= s) process_event(queue_.pop(), m);
        sample_belief_error(s, m);
      }
    }
    for (;;) {
      Event e = queue_.pop();
      if (const auto* b = std::get_if<EpochBoundary>(&e.body)) {
        if (b->index != index) throw std::logic_error("epoch boundary out of order");
        return;
      }
      process_event(std::move(e), m);
    }
  }

  void process_event(Event e, EpisodeMetrics& m) {
    if (const auto* fd = std::get_if<ForwardDelivery>(&e.body)) {
      on_forward_delivery(*fd, e.time);
    } else {
      on_reverse_delivery(std::get<ReverseDelivery>(e.body), e.time, m);
    }
  }

  void sample_belief_error(double s, EpisodeMetrics& m) {
    for (ParticleSet& f : filters_) f.advance(s);
    for (int n = 0; n < cfg_.n_agents; ++n) {
      double truth = receiver_.true_age(n, s);
      double no_ack = s - truth_[static_cast<std::size_t>(n)].last_admitted_send;
      m.abs_err_filter +=
          std::abs(filters_[static_cast<std::size_t>(n)].summary().mean - truth);
      m.abs_err_no_ack += std::abs(no_ack - truth);
      ++m.belief_samples;
    }
  }

  void on_forward_delivery(const ForwardDelivery& fd, double now) {
    c1_.deliver(fd.ticket);
    AgentTruth& gt = truth_[static_cast<std::size_t>(fd.msg.agent)];
    --gt.in_c1;
    std::optional<Ack> ack = receiver_.on_message(fd.msg, now);
    if (!ack) {
      ++gt.stale_delivered;
      return;
    }
    auto admitted = admit_ack(c2_, *ack, now, cfg_.lambda2, reverse_delays_);
    if (!admitted) {
      ++gt.acks_dropped_c2;
      return;
    }
    ++gt.acks_in_c2;
    queue_.schedule(admitted->delivery_time, ReverseDelivery{admitted->ack, admitted->ticket});
  }

  void on_reverse_delivery(const ReverseDelivery& rd, double now, EpisodeMetrics& m) {
    c2_.deliver(rd.ticket);
    const int n = rd.ack.agent;
    AgentTruth& gt = truth_[static_cast<std::size_t>(n)];
    --gt.acks_in_c2;
    ++gt.acks_delivered;
    AgentState& agent = agents_[static_cast<std::size_t>(n)];
    AckOutcome out = agent.register_ack(rd.ack, now);
    if (use_filters_ && out.dominating) {
      ParticleSet& f = filters_[static_cast<std::size_t>(n)];
      f.apply_observation(rd.ack.age, rd.ack.update_time, now, agent.live_messages());
      if (opts_.verify_reset_exactness && f.latest_reset_time() != rd.ack.update_time)
        ++m.reset_exactness_violations;
    }
  }

  SystemSnapshot snapshot(double now) {
    SystemSnapshot s;
    s.true_age.reserve(static_cast<std::size_t>(cfg_.n_agents));
    for (int n = 0; n < cfg_.n_agents; ++n) {
      s.true_age.push_back(receiver_.true_age(n, now));
      s.msgs_in_c1.push_back(truth_[static_cast<std::size_t>(n)].in_c1);
      s.acks_in_c2.push_back(truth_[static_cast<std::size_t>(n)].acks_in_c2);
      s.unacked.push_back(agents_[static_cast<std::size_t>(n)].unacked());
      s.last_observed_load.push_back(agents_[static_cast<std::size_t>(n)].last_observed_load());
    }
    s.channel_load = c1_.load();
    if (use_filters_) {
      for (const ParticleSet& f : filters_) {
        BeliefSummary b = f.summary();
        s.belief_mean.push_back(b.mean);
        s.belief_std.push_back(b.stddev);
      }
      if (model_ == ObsModel::NAgentDecParticles)
        for (const ParticleSet& f : filters_) s.particle_values.push_back(f.values());
    }
    return s;
  }

  std::vector<std::uint8_t> decide(const SystemSnapshot& snap, int epoch) {
    if (opts_.action_script) {
      const auto& script = *opts_.action_script;
      if (epoch < static_cast<int>(script.size())) return script[static_cast<std::size_t>(epoch)];
      return std::vector<std::uint8_t>(static_cast<std::size_t>(cfg_.n_agents), 0);
    }
    if (const auto* fixed = std::get_if<FixedPolicy>(&policy_))
      return fixed_actions(*fixed, snap.true_age, fixed_select_);

    const auto& upper = std::get<UpperPolicy>(policy_);
    if (upper.quant_levels != cfg_.quant_levels)
      throw std::invalid_argument("policy quantization levels do not match config");
    std::vector<double> obs = build_observation(model_, variant_, snap);
    DecisionRule rule = evaluate_upper(upper, obs);
    const std::vector<double>& age =
        variant_ == ObsVariant::AvgBelief || model_ == ObsModel::NAgentDecParticles
            ? snap.belief_mean
            : snap.true_age;
    std::vector<std::uint8_t> a(static_cast<std::size_t>(cfg_.n_agents), 0);
    for (int n = 0; n < cfg_.n_agents; ++n) {
      int level = quantize(std::max(0.0, age[static_cast<std::size_t>(n)]), cfg_.quant_levels);
      a[static_cast<std::size_t>(n)] =
          static_cast<std::uint8_t>(act(rule, level, action_streams_[static_cast<std::size_t>(n)]));
    }
    return a;
  }

  std::int64_t admit_and_send(const std::vector<std::uint8_t>& actions, double now,
                              EpisodeMetrics&) {
    std::vector<Message> outgoing;
    for (int n = 0; n < cfg_.n_agents; ++n) {
      if (!actions[static_cast<std::size_t>(n)]) continue;
      AgentState& agent = agents_[static_cast<std::size_t>(n)];
      outgoing.push_back(Message{n, agent.next_message_index(), now});
    }
    EpochAdmission result =
        admit_epoch(c1_, std::move(outgoing), now, cfg_.lambda1, admission_, forward_delays_);
    for (const AdmittedMessage& am : result.admitted) {
      AgentState& agent = agents_[static_cast<std::size_t>(am.msg.agent)];
      const SendRecord& rec = agent.register_send(now, true, result.load_after);
      AgentTruth& gt = truth_[static_cast<std::size_t>(am.msg.agent)];
      ++gt.in_c1;
      gt.last_admitted_send = now;
      if (use_filters_)
        filters_[static_cast<std::size_t>(am.msg.agent)].note_send(rec.index, now);
      queue_.schedule(am.delivery_time, ForwardDelivery{{am.msg.agent, rec.index, now}, am.ticket});
    }
    for (const Message& dm : result.dropped)
      agents_[static_cast<std::size_t>(dm.agent)].register_send(now, false, result.load_after);
    return static_cast<std::int64_t>(result.dropped.size());
  }

  void record_diagnostics(double now, const SystemSnapshot& snap, EpisodeMetrics& m) {
    if (opts_.trace_agent >= 0) {
      if (opts_.trace_agent >= cfg_.n_agents)
        throw std::invalid_argument("trace agent index out of range");
      const std::size_t k = static_cast<std::size_t>(opts_.trace_agent);
      m.trace.push_back({now, snap.true_age[k], snap.belief_mean[k], snap.belief_std[k],
                         agents_[k].acks_received()});
    }
    if (!opts_.snapshot_times.empty()) {
      for (double st : opts_.snapshot_times)
        if (st == now) m.snapshots.push_back({now, snap.true_age, snap.belief_mean});
    }
    if (opts_.collect_belief_error && use_filters_) {
      for (int n = 0; n < cfg_.n_agents; ++n) {
        double truth = snap.true_age[static_cast<std::size_t>(n)];
        double no_ack = now - truth_[static_cast<std::size_t>(n)].last_admitted_send;
        m.abs_err_filter += std::abs(snap.belief_mean[static_cast<std::size_t>(n)] - truth);
        m.abs_err_no_ack += std::abs(no_ack - truth);
        ++m.belief_samples;
      }
    }
  }

  void check_invariants(double now) {
    if (c1_.occupied() > c1_.capacity() || c2_.occupied() > c2_.capacity())
      throw std::logic_error("channel occupancy exceeds capacity");
    int total_c1 = 0, total_c2 = 0;
    for (int n = 0; n < cfg_.n_agents; ++n) {
      const AgentTruth& gt = truth_[static_cast<std::size_t>(n)];
      total_c1 += gt.in_c1;
      total_c2 += gt.acks_in_c2;
      int expected = gt.in_c1 + gt.stale_delivered + gt.acks_in_c2 + gt.acks_dropped_c2;
      if (agents_[static_cast<std::size_t>(n)].unacked() != expected)
        throw std::logic_error("unacknowledged count diverged from ground truth");
      double age = receiver_.true_age(n, now);
      if (age < 0.0 || age > now + 1e-9)
        throw std::logic_error("true age outside [0, t]");
    }
    if (total_c1 != c1_.occupied() || total_c2 != c2_.occupied())
      throw std::logic_error("per-agent channel counts diverged from occupancy");
  }

  SimConfig cfg_;
  const PolicySpec& policy_;
  ObsModel model_;
  ObsVariant variant_;
  RunOptions opts_;
  RngStreams streams_;
  int horizon_;
  bool use_filters_;

  EventQueue queue_;
  ChannelState c1_;
  ChannelState c2_;
  Receiver receiver_;
  DelaySampler forward_delays_;
  DelaySampler reverse_delays_;
  RngStream admission_;
  RngStream fixed_select_;
  std::vector<AgentState> agents_;
  std::vector<ParticleSet> filters_;
  std::vector<RngStream> action_streams_;
  std::vector<AgentTruth> truth_;
};

}  // namespace

EpisodeMetrics run_episode(const SimConfig& cfg, const PolicySpec& policy,
                           ObsModel model, ObsVariant variant, std::uint64_t seed,
                           const RunOptions& opts) {
  cfg.validate();
  Simulation sim(cfg, policy, model, variant, seed, opts);
  return sim.run();
}

double episode_return(const SimConfig& cfg, const PolicySpec& policy, ObsModel model,
                      ObsVariant variant, std::uint64_t seed) {
  RunOptions opts;
  opts.horizon = cfg.train_epochs;
  return run_episode(cfg, policy, model, variant, seed, opts).episode_return;
}

}  // namespace aoisim
