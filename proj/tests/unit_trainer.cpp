#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "aoisim/trainer.hpp"

using namespace aoisim;

TEST_CASE("elite count clamps") {
  TrainConfig tc;
  tc.population = 16;
  tc.elite_fraction = 0.2;
  CHECK(tc.elite_count() == 3);
  tc.population = 4;
  tc.elite_fraction = 0.01;
  CHECK(tc.elite_count() == 1);
  tc.population = 3;
  CHECK_THROWS_AS(tc.validate(), std::invalid_argument);
}

TEST_CASE("recovers the optimum of a known quadratic") {
  const int dim = 16;
  std::vector<double> target(dim);
  for (int d = 0; d < dim; ++d) target[static_cast<std::size_t>(d)] = 0.1 * d - 0.8;

  auto objective = [&](std::span<const double> theta) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
      double diff = theta[static_cast<std::size_t>(d)] - target[static_cast<std::size_t>(d)];
      s += diff * diff;
    }
    return -s;
  };

  TrainConfig tc;
  tc.population = 64;
  tc.elite_fraction = 0.25;
  tc.iterations = 50;
  tc.seed = 2024;
  CemOutcome out = cem_maximize(tc, dim, objective);

  double err = 0.0;
  for (int d = 0; d < dim; ++d) {
    double diff = out.best_params[static_cast<std::size_t>(d)] - target[static_cast<std::size_t>(d)];
    err = std::max(err, std::abs(diff));
  }
  CHECK(err < 0.1);
  CHECK(out.log.rows.size() == 50);
}

TEST_CASE("the logged best is monotone and runs are reproducible") {
  auto objective = [](std::span<const double> theta) {
    double s = 0.0;
    for (double t : theta) s += std::sin(3.0 * t) - 0.1 * t * t;
    return s;
  };
  TrainConfig tc;
  tc.population = 24;
  tc.iterations = 20;
  tc.seed = 5;
  CemOutcome a = cem_maximize(tc, 6, objective);
  CemOutcome b = cem_maximize(tc, 6, objective, /*parallel=*/false);

  double prev = -std::numeric_limits<double>::infinity();
  for (const TrainLog::Row& row : a.log.rows) {
    CHECK(row.best >= prev);
    prev = row.best;
  }
  CHECK(a.best_params == b.best_params);
  for (std::size_t i = 0; i < a.log.rows.size(); ++i) {
    CHECK(a.log.rows[i].best == b.log.rows[i].best);
    CHECK(a.log.rows[i].mean == b.log.rows[i].mean);
    CHECK(a.log.rows[i].std_norm == b.log.rows[i].std_norm);
  }
}

TEST_CASE("a non-finite objective aborts with diagnostics") {
  auto objective = [](std::span<const double>) {
    return std::numeric_limits<double>::quiet_NaN();
  };
  TrainConfig tc;
  tc.population = 8;
  tc.iterations = 3;
  CHECK_THROWS_AS(cem_maximize(tc, 2, objective), std::runtime_error);
}

TEST_CASE("train log renders as CSV") {
  TrainLog log;
  log.rows.push_back({0, -5.0, -9.5, 1.25});
  std::string csv = train_log_csv(log);
  CHECK(csv.find("iteration,best_return,mean_return,param_std_norm\n") == 0);
  CHECK(csv.find("0,-5,-9.5,1.25\n") != std::string::npos);
}
