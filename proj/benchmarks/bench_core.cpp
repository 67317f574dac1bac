// Microbenchmarks for the hot paths: simulation, impulse response
// accumulation, least squares fitting, forecasting and counterfactual replay.
// All cases run on the bundled seven-variable loan-scoring generator so the
// numbers are comparable across changes.

#include <benchmark/benchmark.h>

#include "causalvar/counterfactual.hpp"
#include "causalvar/datasets.hpp"
#include "causalvar/estimate.hpp"
#include "causalvar/forecast.hpp"
#include "causalvar/intervention.hpp"
#include "causalvar/model.hpp"
#include "causalvar/simulate.hpp"
#include "causalvar/stability.hpp"

namespace {

using namespace causalvar;

const VarModel& scoring_model() {
  static VarModel m = svar_to_var(german_structural(0.1));
  return m;
}

void bm_simulate(benchmark::State& state) {
  const auto& m = scoring_model();
  SimConfig cfg;
  cfg.length = state.range(0);
  cfg.seed = 1;
  for (auto _ : state) {
    auto path = simulate(m, cfg);
    benchmark::DoNotOptimize(path.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_simulate)->Arg(1000)->Arg(10000);

void bm_ma_weights(benchmark::State& state) {
  const auto& m = scoring_model();
  const int horizon = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto phis = ma_coefficients(m, horizon);
    benchmark::DoNotOptimize(phis.back().data());
  }
}
BENCHMARK(bm_ma_weights)->Arg(100)->Arg(1000);

void bm_fit_panel(benchmark::State& state) {
  auto gen = generate_german(3, state.range(0), 30);
  FitOptions opts;
  opts.lag = 4;
  for (auto _ : state) {
    auto rep = fit(gen.panel, opts);
    benchmark::DoNotOptimize(rep.model.coeffs.data());
  }
}
BENCHMARK(bm_fit_panel)->Arg(100)->Arg(400);

void bm_forecast(benchmark::State& state) {
  const auto& m = scoring_model();
  SimConfig cfg;
  cfg.length = 50;
  cfg.seed = 5;
  auto history = simulate(m, cfg);
  const int horizon = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto fc = forecast(m, history, horizon);
    benchmark::DoNotOptimize(fc.means.data());
  }
}
BENCHMARK(bm_forecast)->Arg(10)->Arg(50);

void bm_effect_path(benchmark::State& state) {
  const auto& m = scoring_model();
  Intervention iv;
  iv.kind = InterventionKind::additive;
  iv.force = Eigen::VectorXd::Zero(7);
  iv.force[0] = 0.2;
  TimeSeries empty;
  empty.values.resize(0, 7);
  const int horizon = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto path = causal_effect_path(m, iv, empty, horizon);
    benchmark::DoNotOptimize(path.effects.data());
  }
}
BENCHMARK(bm_effect_path)->Arg(50)->Arg(200);

void bm_counterfactual(benchmark::State& state) {
  const auto& m = scoring_model();
  SimConfig cfg;
  cfg.length = state.range(0);
  cfg.seed = 8;
  auto traj = simulate(m, cfg);
  Intervention iv;
  iv.kind = InterventionKind::additive;
  iv.force = Eigen::VectorXd::Zero(7);
  iv.force[0] = 0.2;
  for (auto _ : state) {
    auto res = counterfactual_trajectory(m, traj, iv, 4, traj.length() - 1);
    benchmark::DoNotOptimize(res.counterfactual.values.data());
  }
}
BENCHMARK(bm_counterfactual)->Arg(500)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
