#pragma once

#include <optional>

#include "causalvar/model.hpp"
#include "causalvar/series.hpp"

namespace causalvar {

struct FitOptions {
  int lag = 1;
  bool include_intercept = true;
  // Ridge penalty on the lag coefficients (never the intercept) for
  // ill-conditioned designs. 0 keeps plain least squares.
  double ridge = 0.0;
  // When set, coefficient (effect, cause) may be nonzero only for edges of the
  // graph; self-loops are always allowed.
  std::optional<CausalGraph> graph;
};

struct FitReport {
  VarModel model;
  // Per-entity presample rows are excluded, remaining residual rows are
  // concatenated in panel order.
  TimeSeries residuals;
  double aic = 0.0;
  double bic = 0.0;
  long n_effective = 0;
};

// Equation-by-equation least squares of X_t on lagged values (and 1).
// Throws domain_error when fewer usable rows than regressors remain or the
// design is ill-conditioned beyond 1e12 after the ridge.
FitReport fit(const PanelSeries& data, const FitOptions& opts);
FitReport fit(const TimeSeries& data, const FitOptions& opts);

// One-step-ahead prediction errors of `model` on the data; rows for
// t = start_index + lag onward.
TimeSeries residuals(const VarModel& model, const TimeSeries& data);
TimeSeries residuals(const VarModel& model, const PanelSeries& data);

enum class InfoCriterion { aic, bic };

// Fits lags 1..max_lag on the common sample (targets from max_lag onward) and
// returns the criterion minimizer; ties break towards the smaller lag.
int select_lag(const PanelSeries& data, int max_lag,
               InfoCriterion criterion = InfoCriterion::bic,
               const FitOptions& base = {});
int select_lag(const TimeSeries& data, int max_lag,
               InfoCriterion criterion = InfoCriterion::bic,
               const FitOptions& base = {});

}  // namespace causalvar
