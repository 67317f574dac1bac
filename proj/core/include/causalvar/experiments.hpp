#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "causalvar/intervention.hpp"
#include "causalvar/metrics.hpp"

namespace causalvar {

// One benchmark cell: dataset, training size and horizon, repeated over fresh
// seeds. The same struct also parameterizes the screening scenario.
struct ExperimentSpec {
  std::string dataset = "german";  // "german" or "pendulum"
  double sigma = 0.1;
  std::uint64_t seed = 0;
  long train_size = 500;
  long test_size = 2400;  // rolling forecast origins for observational scoring
  int horizon = 10;
  int n_runs = 10;
  int fit_lag = 0;             // 0 = the generator's true lag
  bool constrain_graph = false;  // restrict fitting to the generator's graph
  std::vector<int> targets;    // scored components; empty = all

  std::optional<Intervention> intervention;  // interventional and crossing runs

  // Crossing-scenario extras.
  int n_entities = 50;
  long history_length = 100;
  double threshold = 0.0;
  int crossing_target = 0;
};

struct RunSummary {
  double mean = 0.0;
  double sd = 0.0;
};

struct ObservationalResult {
  // Metric per run, horizon-step-ahead rolling forecasts over the test window.
  std::vector<MetricReport> fitted_runs;
  std::vector<MetricReport> oracle_runs;
  RunSummary fitted_mae, fitted_rmse, fitted_smape;
  RunSummary oracle_mae, oracle_rmse, oracle_smape;
};

// Per run: simulate a fresh trajectory, fit on the first train_size rows with
// the true lag, then score h-step-ahead forecasts over the following
// test_size origins. The oracle is the generating model scored identically.
ObservationalResult run_observational(const ExperimentSpec& spec);

struct InterventionalResult {
  // Row r, column h-1: |predicted - true| effect at the h-th intervened step,
  // averaged over target components.
  Eigen::MatrixXd per_run_error;
  Eigen::VectorXd mean_error;  // over runs, per horizon step
  Eigen::VectorXd sd_error;
  // Mean absolute long-run effect over the targets; the natural scale for the
  // errors above. NaN when the intervened dynamics have no stationary limit.
  double asymptote_scale = 0.0;
  bool asymptote_valid = false;
};

// Per run: fit on fresh data, compare the fitted model's effect path against
// the generator's. Requires spec.intervention.
InterventionalResult run_interventional(const ExperimentSpec& spec);

struct CrossingReport {
  struct Record {
    std::string entity;
    bool crossed = false;
    long time = 0;  // 0 = already at/above threshold at the forecast origin
  };
  std::vector<Record> records;
  // Index k counts entities first reaching the threshold k steps in; size
  // horizon + 1.
  std::vector<long> histogram;
  long never_count = 0;
};

// For every entity of a generated panel: forecast under the intervention (or
// plain forecast when none) and record when the target component's expected
// path first reaches the threshold.
CrossingReport run_usecase_crossing(const ExperimentSpec& spec);

}  // namespace causalvar
