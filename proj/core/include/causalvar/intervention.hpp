#pragma once

#include <Eigen/Dense>

#include "causalvar/model.hpp"
#include "causalvar/stability.hpp"

namespace causalvar {

enum class InterventionKind {
  // Constant shift force added to the intervened components' equations.
  additive,
  // Proportional pull of strength force towards target: the equation gains
  // force .* (target - X_t), solved for X_t. force -> infinity pins the
  // component, force = 0 is a no-op.
  forcing,
  // Hard replacement: the component is severed from its parents and held at
  // target exactly.
  assignment,
};

struct Intervention {
  InterventionKind kind = InterventionKind::additive;
  Eigen::VectorXd force;   // additive shift, forcing strength, or assignment mask
  Eigen::VectorXd target;  // pulled-towards / assigned values; unused for additive
  long start = 0;          // first affected step, relative to the consumer's window
};

// nu + F; dynamics and noise untouched.
VarModel apply_additive(const VarModel& model, const Eigen::VectorXd& force);

// With M = (I + diag(force))^{-1}: intercept M (nu + force .* target),
// coefficients M B_k, noise M Sigma M'. force must be componentwise >= 0.
// Stability is NOT preserved in general; callers decide whether to check.
VarModel apply_forcing(const VarModel& model, const Eigen::VectorXd& force,
                       const Eigen::VectorXd& target);

// Row surgery pinning one component: its coefficient rows and noise row/column
// are zeroed and its intercept becomes `value`.
VarModel do_intervention(const VarModel& model, int component, double value);

// Uniform entry point used by simulation, forecasting and counterfactuals.
// For assignment interventions every component with force != 0 is pinned to
// the matching target entry.
VarModel intervened_model(const VarModel& model, const Intervention& iv);

// How the intervention filters the structural shock: identity for additive,
// (I + diag(force))^{-1} for forcing, identity with pinned rows zeroed for
// assignment. Coupled simulations feed M u_t to the intervened path.
Eigen::MatrixXd noise_transform(const VarModel& model, const Intervention& iv);

struct ForcingStabilityReport {
  StabilityReport report;  // of the transformed dynamics
  bool preserved = false;  // base model stable and transformed model stable
};

// Checks whether stability survives the forcing pull.
ForcingStabilityReport forcing_stability(const VarModel& model,
                                         const Eigen::VectorXd& force,
                                         double margin = 1e-8);

void validate_intervention(const VarModel& model, const Intervention& iv);

}  // namespace causalvar
