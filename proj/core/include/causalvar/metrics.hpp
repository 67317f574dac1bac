#pragma once

#include <vector>

#include <Eigen/Dense>

namespace causalvar {

struct MetricReport {
  double mae = 0.0;
  double rmse = 0.0;
  // Symmetric percentage error on the 0..200 scale; a 0/0 term counts as 0.
  double smape = 0.0;
  Eigen::VectorXd per_component_mae;
  Eigen::VectorXd per_component_rmse;
  Eigen::VectorXd per_component_smape;
  long count = 0;  // scored rows
};

// Scores predictions against ground truth row by row. `targets` restricts the
// scored columns (empty = all); overall numbers average over the scored
// entries, per-component vectors follow the targets' order.
MetricReport metrics(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& truth,
                     const std::vector<int>& targets = {});

}  // namespace causalvar
