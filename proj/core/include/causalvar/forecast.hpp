#pragma once

#include <vector>

#include <Eigen/Dense>

#include "causalvar/intervention.hpp"
#include "causalvar/model.hpp"
#include "causalvar/series.hpp"

namespace causalvar {

struct Forecast {
  // Row k-1 is the conditional mean of X at k steps past the end of history.
  Eigen::MatrixXd means;
  // Matching forecast-error covariances, one d x d matrix per step.
  std::vector<Eigen::MatrixXd> covariances;
  // Set when the dynamics active at the end of the horizon are unstable
  // (possible under forcing or assignment); values are still computed.
  bool unstable_dynamics = false;
};

// Optimal linear predictor: recursive conditional means with known history
// substituted, error covariance sum_{i<k} Phi_i Sigma_u Phi_i'.
// History must cover at least `lag` observations.
Forecast forecast(const VarModel& model, const TimeSeries& history, int horizon);

// Same but the dynamics switch to the intervened model at forecast step
// iv.start (0 = the first predicted step). Covariances account for the regime
// change exactly; under an additive intervention they match the observational
// ones.
Forecast forecast_intervened(const VarModel& model, const Intervention& iv,
                             const TimeSeries& history, int horizon);

struct CausalEffectPath {
  // Row k = expected intervened-minus-factual difference k steps after the
  // intervention begins, k = 0..horizon.
  Eigen::MatrixXd effects;
  // Long-run difference of the stationary means; valid only when both the
  // base and intervened dynamics are stable.
  Eigen::VectorXd asymptote;
  bool asymptote_valid = false;
};

// Additive effects are deterministic and history-free:
//   effect(k) = sum_{l<=k} Phi_l force,  asymptote (I - sum B)^{-1} force.
// Forcing and assignment effects come from the forecast difference given the
// supplied history.
CausalEffectPath causal_effect_path(const VarModel& model, const Intervention& iv,
                                    const TimeSeries& history, int horizon);

}  // namespace causalvar
