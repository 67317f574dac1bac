#include "causalvar/counterfactual.hpp"

#include <algorithm>
#include <string>

#include "causalvar/errors.hpp"

namespace causalvar {

namespace {

ResidualDiagnostics diagnose(const Eigen::MatrixXd& resid) {
  ResidualDiagnostics diag;
  const long n = resid.rows();
  const int d = static_cast<int>(resid.cols());
  diag.mean = resid.colwise().mean().transpose();
  Eigen::MatrixXd centered = resid.rowwise() - diag.mean.transpose();
  diag.covariance = n > 1
      ? Eigen::MatrixXd((centered.transpose() * centered) / static_cast<double>(n - 1))
      : Eigen::MatrixXd::Zero(d, d);

  diag.lags = static_cast<int>(std::min<long>(10, n / 5));
  diag.ljung_box = Eigen::VectorXd::Zero(d);
  if (diag.lags < 1) return diag;
  for (int j = 0; j < d; ++j) {
    double var = centered.col(j).squaredNorm();
    if (var <= 0.0) continue;
    double q = 0.0;
    for (int k = 1; k <= diag.lags; ++k) {
      double acf = centered.col(j).head(n - k).dot(centered.col(j).tail(n - k)) / var;
      q += acf * acf / static_cast<double>(n - k);
    }
    diag.ljung_box[j] = static_cast<double>(n) * (static_cast<double>(n) + 2.0) * q;
  }
  return diag;
}

}  // namespace

CounterfactualResult counterfactual_trajectory(const VarModel& model,
                                               const TimeSeries& trajectory,
                                               const Intervention& iv, long t0, long t1) {
  model.validate();
  validate_intervention(model, iv);
  const int d = model.dim();
  const int p = model.lag();
  if (trajectory.dim() != d) {
    throw domain_error("counterfactual: trajectory dimension does not match the model");
  }
  if (t0 > t1) throw domain_error("counterfactual: t0 must be <= t1");
  if (!trajectory.covers(t0 - p) || !trajectory.covers(t1)) {
    throw domain_error(
        "counterfactual: trajectory must cover [" + std::to_string(t0 - p) + ", " +
        std::to_string(t1) + "], have [" + std::to_string(trajectory.start_index) + ", " +
        std::to_string(trajectory.start_index + trajectory.length() - 1) + "]");
  }

  const long n = t1 - t0 + 1;

  // Abduction: the shock that must have hit each factual step.
  Eigen::MatrixXd shocks(n, d);
  for (long t = t0; t <= t1; ++t) {
    Eigen::VectorXd pred = model.intercept;
    for (int k = 1; k <= p; ++k) {
      pred.noalias() +=
          model.coeffs[static_cast<std::size_t>(k - 1)] * trajectory.at_time(t - k).transpose();
    }
    shocks.row(t - t0) = trajectory.at_time(t) - pred.transpose();
  }

  VarModel altered = intervened_model(model, iv);
  Eigen::MatrixXd filter = noise_transform(model, iv);
  const long action_from = t0 + iv.start;

  CounterfactualResult out;
  out.factual.start_index = t0;
  out.factual.values.resize(n, d);
  for (long t = t0; t <= t1; ++t) out.factual.values.row(t - t0) = trajectory.at_time(t);

  // Prediction: replay the window with the recovered shocks through the
  // modified equations; history before t0 stays factual.
  Eigen::MatrixXd window(p + n, d);
  for (int k = 0; k < p; ++k) {
    window.row(k) = trajectory.at_time(t0 - p + k);
  }
  out.counterfactual.start_index = t0;
  out.counterfactual.values.resize(n, d);
  for (long t = t0; t <= t1; ++t) {
    const bool active = t >= action_from;
    const VarModel& m = active ? altered : model;
    Eigen::VectorXd u = shocks.row(t - t0).transpose();
    if (active) u = filter * u;
    Eigen::VectorXd x = m.intercept + u;
    for (int k = 1; k <= p; ++k) {
      x.noalias() += m.coeffs[static_cast<std::size_t>(k - 1)] * window.row(p + (t - t0) - k).transpose();
    }
    window.row(p + (t - t0)) = x.transpose();
    out.counterfactual.values.row(t - t0) = x.transpose();
  }

  out.effect.start_index = t0;
  out.effect.values = out.counterfactual.values - out.factual.values;
  out.diagnostics = diagnose(shocks);
  return out;
}

}  // namespace causalvar
