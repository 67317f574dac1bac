#include "causalvar/metrics.hpp"

#include <cmath>
#include <string>

#include "causalvar/errors.hpp"

namespace causalvar {

MetricReport metrics(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& truth,
                     const std::vector<int>& targets) {
  if (predictions.rows() != truth.rows() || predictions.cols() != truth.cols()) {
    throw domain_error("metrics: prediction and truth shapes differ");
  }
  std::vector<int> cols = targets;
  if (cols.empty()) {
    for (int j = 0; j < predictions.cols(); ++j) cols.push_back(j);
  }
  for (int j : cols) {
    if (j < 0 || j >= predictions.cols()) {
      throw domain_error("metrics: target column " + std::to_string(j) + " out of range");
    }
  }

  const long n = predictions.rows();
  const int m = static_cast<int>(cols.size());
  MetricReport report;
  report.count = n;
  report.per_component_mae = Eigen::VectorXd::Zero(m);
  report.per_component_rmse = Eigen::VectorXd::Zero(m);
  report.per_component_smape = Eigen::VectorXd::Zero(m);
  if (n == 0 || m == 0) return report;

  for (int c = 0; c < m; ++c) {
    int j = cols[static_cast<std::size_t>(c)];
    double abs_sum = 0.0, sq_sum = 0.0, smape_sum = 0.0;
    for (long r = 0; r < n; ++r) {
      double pred = predictions(r, j);
      double act = truth(r, j);
      double err = std::abs(pred - act);
      abs_sum += err;
      sq_sum += err * err;
      double denom = std::abs(pred) + std::abs(act);
      smape_sum += denom > 0.0 ? 200.0 * err / denom : 0.0;
    }
    report.per_component_mae[c] = abs_sum / static_cast<double>(n);
    report.per_component_rmse[c] = std::sqrt(sq_sum / static_cast<double>(n));
    report.per_component_smape[c] = smape_sum / static_cast<double>(n);
  }
  report.mae = report.per_component_mae.mean();
  report.smape = report.per_component_smape.mean();
  // Overall RMSE pools squared errors rather than averaging per-column RMSEs.
  double pooled = report.per_component_rmse.array().square().mean();
  report.rmse = std::sqrt(pooled);
  return report;
}

}  // namespace causalvar
