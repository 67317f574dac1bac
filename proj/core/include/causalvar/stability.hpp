#pragma once

#include <vector>

#include <Eigen/Dense>

#include "causalvar/model.hpp"

namespace causalvar {

// Stacked one-lag form of the process: top block row holds B_1..B_p, the
// subdiagonal carries identities. Size dp x dp.
Eigen::MatrixXd companion_matrix(const VarModel& model);

struct StabilityReport {
  bool stable = false;
  double spectral_radius = 0.0;
  // Companion eigenvalue moduli, descending; reciprocals of the moduli of the
  // roots of det(I - B_1 z - ... - B_p z^p).
  std::vector<double> root_moduli;
};

// Stable iff spectral_radius < 1 - margin.
StabilityReport check_stability(const VarModel& model, double margin = 1e-8);

// Moving-average weights Phi_0..Phi_H:
//   Phi_0 = I,  Phi_i = sum_{j=1..min(i,p)} Phi_{i-j} B_j.
// Phi_k(j, i) is the response of component j, k steps ahead, to a unit shock
// on component i.
std::vector<Eigen::MatrixXd> ma_coefficients(const VarModel& model, int horizon);

struct LongRunMatrix {
  Eigen::MatrixXd matrix;       // (I - B_1 - ... - B_p)^{-1}
  double condition = 0.0;       // 2-norm condition of I - sum B_k
  bool ill_conditioned = false; // condition beyond 1e12
};

// Total accumulated response to a sustained unit shock; equals the sum of all
// MA weights for a stable process. Throws domain_error when unstable.
LongRunMatrix long_run_matrix(const VarModel& model, double margin = 1e-8);

// Stationary mean long_run_matrix * intercept.
Eigen::VectorXd process_mean(const VarModel& model, double margin = 1e-8);

}  // namespace causalvar
