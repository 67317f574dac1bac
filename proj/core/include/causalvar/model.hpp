#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace causalvar {

// Linear vector autoregression
//   X_t = intercept + coeffs[0] X_{t-1} + ... + coeffs[p-1] X_{t-p} + u_t,
// u_t ~ N(0, noise_cov).
//
// Coefficients are stored effect-row: coeffs[k](j, i) is the weight of cause
// component i, lagged k+1 steps, in the equation for effect component j.
struct VarModel {
  Eigen::VectorXd intercept;
  std::vector<Eigen::MatrixXd> coeffs;
  Eigen::MatrixXd noise_cov;

  int dim() const { return static_cast<int>(intercept.size()); }
  int lag() const { return static_cast<int>(coeffs.size()); }

  // Sum of the lag matrices; the zero-frequency coefficient aside from sign.
  Eigen::MatrixXd coeff_sum() const;

  // Throws domain_error on shape mismatch, asymmetric or indefinite noise, p < 1.
  void validate() const;
};

// Structural form with instantaneous effects:
//   X_t = instantaneous' X_t + lag terms + intercept + structural noise.
// `instantaneous` is kept cause-row, entry (i, j) being the contemporaneous
// weight of component i in component j's equation, zero diagonal, acyclic.
// Lag matrices are cause-row as well; reduction transposes everything into
// the effect-row VarModel layout.
struct StructuralVarModel {
  Eigen::MatrixXd instantaneous;
  std::vector<Eigen::MatrixXd> lag_coeffs;
  Eigen::VectorXd intercept;
  Eigen::MatrixXd noise_cov;

  int dim() const { return static_cast<int>(intercept.size()); }
  int lag() const { return static_cast<int>(lag_coeffs.size()); }

  void validate() const;
};

// Reduce the structural form: with A0 = I - instantaneous', the reduced model
// has coefficients A0^{-1} lag_coeffs[k]', intercept A0^{-1} intercept and
// noise A0^{-1} noise_cov A0^{-T}. Requires the instantaneous graph acyclic.
VarModel svar_to_var(const StructuralVarModel& model);

// Directed graph over components; edges run cause -> effect.
struct CausalGraph {
  int dim = 0;
  std::vector<std::pair<int, int>> edges;  // sorted (cause, effect) pairs
  std::vector<std::string> labels;         // optional, size dim when present

  bool has_edge(int cause, int effect) const;
  // Adjacency matrix view, entry (cause, effect).
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> adjacency() const;
};

// Edge cause -> effect iff some lag matrix has |coeffs[k](effect, cause)| > tol.
// Self-loops are reported only when include_self_loops is set.
CausalGraph induced_graph(const VarModel& model, double tol = 1e-12,
                          bool include_self_loops = false);

// Same, over the structural form: union of the lagged supports and the
// instantaneous support. This is the graph of the data-generating equations;
// reducing to a VarModel can add further edges (instantaneous effects compose
// with their causes' lagged parents).
CausalGraph induced_graph(const StructuralVarModel& model, double tol = 1e-12,
                          bool include_self_loops = false);

}  // namespace causalvar
