#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "causalvar/intervention.hpp"
#include "causalvar/model.hpp"

namespace causalvar {

// Static structural model X = coeff X + c + u, u ~ N(0, exo_cov), stored via
// its solution mean rather than the intercept c = (I - coeff) mean.
// Obtained from a stable process by summing the lag matrices; its solution law
// matches the process's long-run normalized statistics.
struct LinearScm {
  Eigen::MatrixXd coeff;    // effect-row, like VarModel coefficients
  Eigen::MatrixXd exo_cov;
  Eigen::VectorXd mean;

  int dim() const { return static_cast<int>(mean.size()); }
  void validate() const;
};

LinearScm to_equilibrium_scm(const VarModel& model);

struct GaussianSolution {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;  // (I - coeff)^{-1} exo_cov (I - coeff)^{-T}
};

// Throws numerical_error when I - coeff is singular.
GaussianSolution scm_solution(const LinearScm& scm);

// Additive: mean shifts by (I - coeff)^{-1} force. Forcing: equations gain
// force .* (target - X), i.e. with M = (I + diag(force))^{-1} the coefficients
// become M coeff, the noise M exo_cov M'. Assignment pins components exactly.
LinearScm scm_intervene(const LinearScm& scm, const Intervention& iv);

struct CommutationReport {
  // Simulated route: equilibrate the intervened process, apply the long-run
  // normalizing transform per replicate, take empirical mean and covariance.
  Eigen::VectorXd simulated_mean;
  Eigen::MatrixXd simulated_cov;
  // Static route: intervene on the equilibrium model and solve.
  Eigen::VectorXd scm_mean;
  Eigen::MatrixXd scm_cov;

  double max_mean_gap = 0.0;     // max abs component difference
  double cov_gap_rel = 0.0;      // Frobenius gap over Frobenius norm
  double max_mean_se = 0.0;      // largest Monte Carlo standard error
  long replicates = 0;
  long length = 0;
};

// Checks that intervening on the process then passing to equilibrium agrees
// with intervening on the equilibrium model directly. Requires both the base
// and the intervened dynamics stable.
CommutationReport verify_commutation(const VarModel& model, const Intervention& iv,
                                     long replicates, long length, std::uint64_t seed);

}  // namespace causalvar
