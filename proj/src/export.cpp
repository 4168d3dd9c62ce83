#include "aoisim/export.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace aoisim {
namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

const char* sweep_kind_name(SweepKind k) {
  switch (k) {
    case SweepKind::Rate: return "rate";
    case SweepKind::Threshold: return "threshold";
    case SweepKind::Agents: return "agents";
  }
  return "?";
}

void append_row(std::string& s, const std::string& key, const MeanCi& v,
                const char* metric) {
  s += key;
  s += ',';
  s += format_g17(v.mean);
  s += ',';
  s += format_g17(v.ci_lo);
  s += ',';
  s += format_g17(v.ci_hi);
  s += ',';
  s += metric;
  s += '\n';
}

nlohmann::json ci_json(const MeanCi& v) {
  return {{"mean", v.mean}, {"ci_lo", v.ci_lo}, {"ci_hi", v.ci_hi}};
}

}  // namespace

ExportFormat parse_format(const std::string& s) {
  if (s == "csv") return ExportFormat::Csv;
  if (s == "doc") return ExportFormat::Doc;
  throw std::invalid_argument("unknown format: " + s + " (expected csv or doc)");
}

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string render_metrics(const AggregateResult& agg, const SimConfig& cfg,
                           std::uint64_t base_seed, ExportFormat format) {
  if (format == ExportFormat::Doc) {
    nlohmann::json j;
    j["format"] = "aoisim-metrics";
    j["version"] = 1;
    j["config"] = hex64(cfg.fingerprint());
    j["seed"] = base_seed;
    j["runs"] = agg.runs;
    for (const MeanCi& v : agg.avg_age) j["avg_age"].push_back(ci_json(v));
    for (const MeanCi& v : agg.cum_drops_per_agent)
      j["cum_drops_per_agent"].push_back(ci_json(v));
    j["time_avg_age"] = ci_json(agg.time_avg_age);
    j["final_cum_drops_per_agent"] = ci_json(agg.final_cum_drops_per_agent);
    j["c2_ack_drops"] = ci_json(agg.c2_ack_drops);
    j["mean_c1_load"] = ci_json(agg.mean_c1_load);
    return j.dump(2) + "\n";
  }
  std::string s = "# aoisim-metrics v1 config=" + hex64(cfg.fingerprint()) +
                  " seed=" + std::to_string(base_seed) + " runs=" + std::to_string(agg.runs) + "\n";
  s += "epoch,mean,ci_lo,ci_hi,metric\n";
  if (agg.runs == 0) return s;
  for (std::size_t e = 0; e < agg.avg_age.size(); ++e)
    append_row(s, std::to_string(e), agg.avg_age[e], "avg_age");
  for (std::size_t e = 0; e < agg.cum_drops_per_agent.size(); ++e)
    append_row(s, std::to_string(e), agg.cum_drops_per_agent[e], "cum_drops_per_agent");
  append_row(s, "-1", agg.time_avg_age, "time_avg_age");
  append_row(s, "-1", agg.final_cum_drops_per_agent, "final_cum_drops_per_agent");
  append_row(s, "-1", agg.c2_ack_drops, "c2_ack_drops");
  append_row(s, "-1", agg.mean_c1_load, "mean_c1_load");
  return s;
}

std::string render_sweep(const SweepResult& sw, const SimConfig& cfg,
                         std::uint64_t base_seed, ExportFormat format) {
  if (format == ExportFormat::Doc) {
    nlohmann::json j;
    j["format"] = "aoisim-sweep";
    j["version"] = 1;
    j["kind"] = sweep_kind_name(sw.kind);
    j["config"] = hex64(cfg.fingerprint());
    j["seed"] = base_seed;
    j["grid"] = sw.grid;
    for (const AggregateResult& r : sw.results) {
      nlohmann::json point;
      point["runs"] = r.runs;
      point["time_avg_age"] = ci_json(r.time_avg_age);
      point["final_cum_drops_per_agent"] = ci_json(r.final_cum_drops_per_agent);
      j["results"].push_back(point);
    }
    return j.dump(2) + "\n";
  }
  int runs = sw.results.empty() ? 0 : sw.results.front().runs;
  std::string s = "# aoisim-sweep v1 kind=" + std::string(sweep_kind_name(sw.kind)) +
                  " config=" + hex64(cfg.fingerprint()) + " seed=" + std::to_string(base_seed) +
                  " runs=" + std::to_string(runs) + "\n";
  s += "grid,mean,ci_lo,ci_hi,metric\n";
  for (std::size_t i = 0; i < sw.grid.size(); ++i) {
    append_row(s, format_g17(sw.grid[i]), sw.results[i].time_avg_age, "time_avg_age");
    append_row(s, format_g17(sw.grid[i]), sw.results[i].final_cum_drops_per_agent,
               "final_cum_drops_per_agent");
  }
  return s;
}

std::string render_trace(const EpisodeMetrics& m, const SimConfig& cfg,
                         std::uint64_t seed, int agent, ExportFormat format) {
  if (format == ExportFormat::Doc) {
    nlohmann::json j;
    j["format"] = "aoisim-trace";
    j["version"] = 1;
    j["config"] = hex64(cfg.fingerprint());
    j["seed"] = seed;
    j["agent"] = agent;
    for (const FilterTraceRow& r : m.trace)
      j["rows"].push_back({{"t", r.t},
                           {"true_age", r.true_age},
                           {"belief_mean", r.belief_mean},
                           {"belief_std", r.belief_std},
                           {"acks_received", r.acks_received}});
    return j.dump(2) + "\n";
  }
  std::string s = "# aoisim-trace v1 config=" + hex64(cfg.fingerprint()) +
                  " seed=" + std::to_string(seed) + " agent=" + std::to_string(agent) + "\n";
  s += "t,true_age,belief_mean,belief_std,acks_received\n";
  for (const FilterTraceRow& r : m.trace) {
    s += format_g17(r.t);
    s += ',';
    s += format_g17(r.true_age);
    s += ',';
    s += format_g17(r.belief_mean);
    s += ',';
    s += format_g17(r.belief_std);
    s += ',';
    s += std::to_string(r.acks_received);
    s += '\n';
  }
  return s;
}

std::string render_snapshots(const EpisodeMetrics& m, const SimConfig& cfg,
                             std::uint64_t seed) {
  std::string s = "# aoisim-hist v1 config=" + hex64(cfg.fingerprint()) +
                  " seed=" + std::to_string(seed) + "\n";
  s += "t,agent,true_age,belief_mean\n";
  for (const PopulationSnapshot& snap : m.snapshots) {
    for (std::size_t n = 0; n < snap.true_age.size(); ++n) {
      s += format_g17(snap.t);
      s += ',';
      s += std::to_string(n);
      s += ',';
      s += format_g17(snap.true_age[n]);
      s += ',';
      s += format_g17(n < snap.belief_mean.size() ? snap.belief_mean[n] : 0.0);
      s += '\n';
    }
  }
  return s;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace aoisim
