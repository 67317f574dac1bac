#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "causalvar/intervention.hpp"
#include "causalvar/model.hpp"
#include "causalvar/series.hpp"

namespace causalvar {

struct SimConfig {
  long length = 0;
  // Steps discarded before the recorded window. The default is enough to wash
  // out the start state for the bundled generator models.
  long burn_in = 200;
  std::uint64_t seed = 0;
  // Substream of `seed` to draw from; lets panels give every entity its own
  // decorrelated noise while staying reproducible under any scheduling.
  std::uint64_t stream = 0;
  // Presample rows in time order (row p-1 is the most recent). Defaults to the
  // stationary mean for stable models, zeros otherwise.
  std::optional<Eigen::MatrixXd> initial_state;
};

TimeSeries simulate(const VarModel& model, const SimConfig& cfg);

struct SimulationWithShocks {
  TimeSeries series;
  TimeSeries shocks;  // the recorded-window noise draws, same shape as series
};

// Same draws as simulate(); additionally returns the u_t that entered each
// recorded step. Useful for residual round-trip checks.
SimulationWithShocks simulate_with_shocks(const VarModel& model, const SimConfig& cfg);

struct CoupledSimulation {
  TimeSeries factual;
  TimeSeries intervened;
};

// Factual and intervened trajectories driven by the same noise draws. The
// factual path is bit-identical to simulate(model, cfg). From output step
// iv.start on, the intervened path follows the transformed dynamics and
// receives the shared shock filtered through noise_transform().
CoupledSimulation simulate_intervened(const VarModel& model, const Intervention& iv,
                                      const SimConfig& cfg);

}  // namespace causalvar
