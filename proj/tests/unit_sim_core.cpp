#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "aoisim/config.hpp"
#include "aoisim/events.hpp"
#include "aoisim/rng.hpp"

using namespace aoisim;

TEST_CASE("config defaults and derived path count") {
  SimConfig cfg = build_config("{}");
  CHECK(cfg.n_agents == 100);
  CHECK(cfg.kappa == 0.5);
  CHECK(cfg.paths == 50);
  CHECK(cfg.lambda1 == 1.5);
  CHECK(cfg.lambda2 == 1.5);
  CHECK(cfg.dt == 1.0);
  CHECK(cfg.train_epochs == 50);
  CHECK(cfg.eval_epochs == 50);
  CHECK(cfg.particles == 100);
  CHECK(cfg.mc_runs == 100);
  CHECK(cfg.quant_levels == 16);
  CHECK(cfg.drop_penalty == 1.0);

  CHECK(build_config(R"({"N":100,"kappa":0.5})").paths == 50);
  CHECK(build_config(R"({"N":2000,"kappa":0.5})").paths == 1000);
  CHECK(build_config(R"({"N":3,"kappa":0.34})").paths == 1);
}

TEST_CASE("config validation names the offending key") {
  CHECK_THROWS_WITH_AS(build_config(R"({"N":0})"), "N must be >= 1", std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_config(R"({"kappa":1.5})"), "kappa must be in (0, 1]",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_config(R"({"N":5,"kappa":0.1})"),
                       "floor(kappa*N) must be >= 1", std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_config(R"({"lambda1":0})"), "lambda1 must be > 0",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_config(R"({"q":1})"), "q must be >= 2", std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_config(R"({"bogus":1})"), "unknown config key: bogus",
                       std::invalid_argument);
  CHECK_THROWS(build_config("not json"));
}

TEST_CASE("config fingerprint is stable and content-sensitive") {
  SimConfig a = build_config("{}");
  SimConfig b = build_config(R"({"N":100})");
  SimConfig c = build_config(R"({"N":101})");
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK(a.fingerprint() != c.fingerprint());
}

TEST_CASE("event queue pops in (time, insertion) order") {
  EventQueue q;
  q.schedule(1.2, EpochBoundary{1});
  q.schedule(0.7, EpochBoundary{2});
  CHECK(std::get<EpochBoundary>(q.pop().body).index == 2);
  CHECK(q.clock() == 0.7);
  CHECK(std::get<EpochBoundary>(q.pop().body).index == 1);
  CHECK(q.clock() == 1.2);
}

TEST_CASE("simultaneous events pop in insertion order") {
  EventQueue q;
  q.schedule(1.0, EpochBoundary{10});
  q.schedule(1.0, EpochBoundary{11});
  CHECK(std::get<EpochBoundary>(q.pop().body).index == 10);
  CHECK(std::get<EpochBoundary>(q.pop().body).index == 11);
}

TEST_CASE("scheduling into the past is an error") {
  EventQueue q;
  q.schedule(2.0, EpochBoundary{0});
  q.pop();
  CHECK_THROWS_AS(q.schedule(1.0, EpochBoundary{1}), std::logic_error);
}

TEST_CASE("clock is nondecreasing over any pop sequence") {
  EventQueue q;
  RngStream s(derive_state(7, StreamKind::Trainer));
  for (int i = 0; i < 200; ++i) q.schedule(10.0 * s.next_unit(), EpochBoundary{i});
  double last = 0.0;
  while (!q.empty()) {
    q.pop();
    CHECK(q.clock() >= last);
    last = q.clock();
  }
}

TEST_CASE("exponential sampler matches Exp(1.5) moments") {
  RngStream s(derive_state(42, StreamKind::ForwardDelay));
  const int n = 1'000'000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double d = s.next_exp(1.5);
    CHECK(d > 0.0);
    sum += d;
    sum2 += d * d;
  }
  double mean = sum / n;
  double var = sum2 / n - mean * mean;
  CHECK(mean == doctest::Approx(2.0 / 3.0).epsilon(0.01));
  CHECK(var == doctest::Approx(4.0 / 9.0).epsilon(0.03));
}

TEST_CASE("streams are deterministic and keyed streams are distinct") {
  RngStream a(derive_state(9, StreamKind::FilterSim, 3, 4));
  RngStream b(derive_state(9, StreamKind::FilterSim, 3, 4));
  RngStream c(derive_state(9, StreamKind::FilterSim, 3, 5));
  bool all_equal = true, any_equal_c = false;
  for (int i = 0; i < 100; ++i) {
    double x = a.next_exp(1.5), y = b.next_exp(1.5), z = c.next_exp(1.5);
    all_equal = all_equal && x == y;
    any_equal_c = any_equal_c || x == z;
  }
  CHECK(all_equal);
  CHECK(!any_equal_c);
}

TEST_CASE("exponential sampler passes a Kolmogorov-Smirnov test") {
  const double rate = 1.5;
  const int n = 100'000;
  RngStream s(derive_state(123, StreamKind::ReverseDelay));
  std::vector<double> xs(n);
  for (double& x : xs) x = s.next_exp(rate);
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    double f = 1.0 - std::exp(-rate * xs[static_cast<std::size_t>(i)]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
  }
  // alpha = 0.01 asymptotic critical value.
  CHECK(d < 1.6276 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("bounded integer draws are unbiased enough for the lottery") {
  RngStream s(derive_state(5, StreamKind::Admission));
  std::vector<int> counts(3, 0);
  const int n = 30'000;
  for (int i = 0; i < n; ++i) ++counts[s.next_below(3)];
  for (int c : counts)
    CHECK(std::abs(c - n / 3) < 5 * std::sqrt(n / 3.0));
}
