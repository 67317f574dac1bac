#pragma once

#include <Eigen/Dense>

#include "causalvar/intervention.hpp"
#include "causalvar/model.hpp"
#include "causalvar/series.hpp"

namespace causalvar {

// How well the abducted shocks behave; a quick lens on model fit.
struct ResidualDiagnostics {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  // Portmanteau autocorrelation statistic per component over `lags` lags;
  // large values flag leftover serial structure.
  Eigen::VectorXd ljung_box;
  int lags = 0;
};

struct CounterfactualResult {
  TimeSeries factual;         // the observed window [t0, t1]
  TimeSeries counterfactual;  // same window under the modified equations
  TimeSeries effect;          // counterfactual - factual
  ResidualDiagnostics diagnostics;
};

// Three-step counterfactual over window [t0, t1] of an observed trajectory:
// recover each step's shock from the factual data, modify the equations per
// the intervention (active from t0 + iv.start), and roll the window forward
// reusing the recovered shocks. A zero additive intervention reproduces the
// factual rows exactly. The trajectory must cover [t0 - lag, t1].
CounterfactualResult counterfactual_trajectory(const VarModel& model,
                                               const TimeSeries& trajectory,
                                               const Intervention& iv, long t0, long t1);

}  // namespace causalvar
