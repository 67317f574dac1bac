#include "causalvar/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "causalvar/errors.hpp"

namespace causalvar {

Eigen::MatrixXd companion_matrix(const VarModel& model) {
  model.validate();
  const int d = model.dim();
  const int p = model.lag();
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d * p, d * p);
  for (int k = 0; k < p; ++k) {
    comp.block(0, k * d, d, d) = model.coeffs[k];
  }
  if (p > 1) {
    comp.block(d, 0, d * (p - 1), d * (p - 1)) =
        Eigen::MatrixXd::Identity(d * (p - 1), d * (p - 1));
  }
  return comp;
}

StabilityReport check_stability(const VarModel& model, double margin) {
  Eigen::MatrixXd comp = companion_matrix(model);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw numerical_error("companion eigenvalue computation did not converge");
  }
  StabilityReport report;
  report.root_moduli.resize(comp.rows());
  const auto& ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    report.root_moduli[static_cast<std::size_t>(i)] = std::abs(ev[i]);
  }
  std::sort(report.root_moduli.begin(), report.root_moduli.end(),
            std::greater<double>());
  report.spectral_radius = report.root_moduli.empty() ? 0.0 : report.root_moduli[0];
  report.stable = report.spectral_radius < 1.0 - margin;
  return report;
}

std::vector<Eigen::MatrixXd> ma_coefficients(const VarModel& model, int horizon) {
  model.validate();
  if (horizon < 0) throw domain_error("ma_coefficients: horizon must be >= 0");
  const int d = model.dim();
  const int p = model.lag();
  std::vector<Eigen::MatrixXd> phi;
  phi.reserve(static_cast<std::size_t>(horizon) + 1);
  phi.push_back(Eigen::MatrixXd::Identity(d, d));
  for (int i = 1; i <= horizon; ++i) {
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(d, d);
    for (int j = 1; j <= std::min(i, p); ++j) {
      next += phi[static_cast<std::size_t>(i - j)] * model.coeffs[static_cast<std::size_t>(j - 1)];
    }
    phi.push_back(std::move(next));
  }
  return phi;
}

LongRunMatrix long_run_matrix(const VarModel& model, double margin) {
  StabilityReport report = check_stability(model, margin);
  if (!report.stable) {
    throw domain_error("long_run_matrix requires a stable process (spectral radius " +
                       std::to_string(report.spectral_radius) + ")");
  }
  const int d = model.dim();
  Eigen::MatrixXd a1 = Eigen::MatrixXd::Identity(d, d) - model.coeff_sum();

  LongRunMatrix out;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a1, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  out.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  out.ill_conditioned = !(out.condition < 1e12);
  if (smin == 0.0) {
    throw numerical_error("long_run_matrix: I - sum(B_k) is numerically singular");
  }
  out.matrix = a1.partialPivLu().solve(Eigen::MatrixXd::Identity(d, d));
  return out;
}

Eigen::VectorXd process_mean(const VarModel& model, double margin) {
  return long_run_matrix(model, margin).matrix * model.intercept;
}

}  // namespace causalvar
