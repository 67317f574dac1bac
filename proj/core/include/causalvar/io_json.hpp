#pragma once

#include <string>
#include <vector>

#include "causalvar/estimate.hpp"
#include "causalvar/forecast.hpp"
#include "causalvar/intervention.hpp"
#include "causalvar/model.hpp"
#include "causalvar/scm.hpp"

namespace causalvar {

// Process model files carry dim/lag/intercept/coeffs/noise_cov plus an
// explicit "orientation": "effect-row" marker; anything else is rejected so a
// transposed model can't slip in silently.
VarModel load_model_json(const std::string& path);
void save_model_json(const VarModel& model, const std::string& path);
std::string model_to_json(const VarModel& model);
VarModel model_from_json(const std::string& text, const std::string& context = "model");

// Intervention files: {"kind": "additive"|"forcing"|"do", "force": [...],
// "target": [...], "start": n}; target defaults to zeros, start to 0.
Intervention load_intervention_json(const std::string& path, int dim);
void save_intervention_json(const Intervention& iv, const std::string& path);

// Equilibrium model files: dim/coeff/exo_cov/mean plus the orientation marker.
LinearScm load_scm_json(const std::string& path);
void save_scm_json(const LinearScm& scm, const std::string& path);

// Fit summary sidecar: {"aic", "bic", "n_effective"}.
void save_fit_sidecar_json(const FitReport& report, const std::string& path);

// Forecast table: k,mean_0..,var_0.. rows (variances are the covariance
// diagonals); the JSON sidecar carries the full covariance matrices.
void save_forecast_csv(const Forecast& fc, const std::string& path);
void save_forecast_json(const Forecast& fc, const std::string& path);

}  // namespace causalvar
