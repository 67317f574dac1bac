#include "causalvar/scm.hpp"

#include <cmath>
#include <mutex>
#include <vector>

#include <Eigen/LU>

#include "causalvar/errors.hpp"
#include "causalvar/simulate.hpp"
#include "causalvar/stability.hpp"
#include "parallel.hpp"

namespace causalvar {

void LinearScm::validate() const {
  const int d = dim();
  if (d < 1) throw domain_error("scm dimension must be at least 1");
  if (coeff.rows() != d || coeff.cols() != d) {
    throw domain_error("scm coeff must be dim x dim");
  }
  if (exo_cov.rows() != d || exo_cov.cols() != d) {
    throw domain_error("scm exo_cov must be dim x dim");
  }
  const double scale = std::max(1.0, exo_cov.cwiseAbs().maxCoeff());
  if ((exo_cov - exo_cov.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw domain_error("scm exo_cov must be symmetric");
  }
}

LinearScm to_equilibrium_scm(const VarModel& model) {
  model.validate();
  if (!check_stability(model).stable) {
    throw domain_error("to_equilibrium_scm requires a stable process");
  }
  LinearScm scm;
  scm.coeff = model.coeff_sum();
  scm.exo_cov = model.noise_cov;
  scm.mean = process_mean(model);
  return scm;
}

namespace {

Eigen::MatrixXd solve_against_identity(const Eigen::MatrixXd& m, const char* context) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) {
    throw numerical_error(std::string(context) + ": matrix is singular");
  }
  return lu.inverse();
}

}  // namespace

GaussianSolution scm_solution(const LinearScm& scm) {
  scm.validate();
  const int d = scm.dim();
  Eigen::MatrixXd inv = solve_against_identity(
      Eigen::MatrixXd::Identity(d, d) - scm.coeff, "scm_solution: I - coeff");
  GaussianSolution sol;
  sol.mean = scm.mean;
  sol.cov = inv * scm.exo_cov * inv.transpose();
  sol.cov = 0.5 * (sol.cov + sol.cov.transpose()).eval();
  return sol;
}

LinearScm scm_intervene(const LinearScm& scm, const Intervention& iv) {
  scm.validate();
  const int d = scm.dim();
  if (iv.force.size() != d) {
    throw domain_error("scm_intervene: force length does not match the model");
  }
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);

  switch (iv.kind) {
    case InterventionKind::additive: {
      LinearScm out = scm;
      Eigen::MatrixXd inv =
          solve_against_identity(eye - scm.coeff, "scm_intervene: I - coeff");
      out.mean = scm.mean + inv * iv.force;
      return out;
    }
    case InterventionKind::forcing: {
      if (iv.target.size() != d) {
        throw domain_error("scm_intervene: target length does not match the model");
      }
      if ((iv.force.array() < 0.0).any()) {
        throw domain_error("forcing strengths must be nonnegative");
      }
      Eigen::VectorXd scale = (1.0 / (1.0 + iv.force.array())).matrix();
      LinearScm out;
      out.coeff = scale.asDiagonal() * scm.coeff;
      out.exo_cov = scale.asDiagonal() * scm.exo_cov * scale.asDiagonal();
      Eigen::VectorXd c = (eye - scm.coeff) * scm.mean;
      Eigen::VectorXd c_new = scale.asDiagonal() * (c + iv.force.cwiseProduct(iv.target));
      // Singular exactly when I - coeff + diag(force) is.
      Eigen::MatrixXd inv = solve_against_identity(
          eye - out.coeff, "scm_intervene: I - coeff + diag(force)");
      out.mean = inv * c_new;
      return out;
    }
    case InterventionKind::assignment: {
      if (iv.target.size() != d) {
        throw domain_error("scm_intervene: target length does not match the model");
      }
      LinearScm out = scm;
      Eigen::VectorXd c = (eye - scm.coeff) * scm.mean;
      for (int i = 0; i < d; ++i) {
        if (iv.force[i] == 0.0) continue;
        out.coeff.row(i).setZero();
        out.exo_cov.row(i).setZero();
        out.exo_cov.col(i).setZero();
        c[i] = iv.target[i];
      }
      Eigen::MatrixXd inv =
          solve_against_identity(eye - out.coeff, "scm_intervene: I - coeff");
      out.mean = inv * c;
      return out;
    }
  }
  throw domain_error("unknown intervention kind");
}

CommutationReport verify_commutation(const VarModel& model, const Intervention& iv,
                                     long replicates, long length, std::uint64_t seed) {
  model.validate();
  if (replicates < 2) throw domain_error("verify_commutation: need at least 2 replicates");
  if (length < 1) throw domain_error("verify_commutation: length must be >= 1");
  if (!check_stability(model).stable) {
    throw domain_error("verify_commutation requires a stable base process");
  }
  VarModel altered = intervened_model(model, iv);
  if (!check_stability(altered).stable) {
    throw domain_error("verify_commutation: intervened dynamics are unstable");
  }

  const int d = model.dim();
  const Eigen::VectorXd mu = process_mean(altered);
  const double inv_sqrt_t = 1.0 / std::sqrt(static_cast<double>(length));

  // One normalized equilibrium draw per replicate: simulate the intervened
  // process at stationarity and apply z = mu + t^{-1/2} sum (x_i - mu).
  Eigen::MatrixXd draws(replicates, d);
  detail::parallel_for(replicates, [&](long r) {
    SimConfig cfg;
    cfg.length = length;
    cfg.seed = seed;
    cfg.stream = static_cast<std::uint64_t>(r);
    TimeSeries path = simulate(altered, cfg);
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(d);
    for (long t = 0; t < length; ++t) {
      acc += path.values.row(t) - mu.transpose();
    }
    draws.row(r) = mu.transpose() + inv_sqrt_t * acc;
  });

  CommutationReport report;
  report.replicates = replicates;
  report.length = length;
  report.simulated_mean = draws.colwise().mean().transpose();
  Eigen::MatrixXd centered = draws.rowwise() - report.simulated_mean.transpose();
  report.simulated_cov =
      (centered.transpose() * centered) / static_cast<double>(replicates - 1);

  GaussianSolution target = scm_solution(scm_intervene(to_equilibrium_scm(model), iv));
  report.scm_mean = target.mean;
  report.scm_cov = target.cov;

  report.max_mean_gap = (report.simulated_mean - target.mean).cwiseAbs().maxCoeff();
  const double denom = std::max(target.cov.norm(), 1e-300);
  report.cov_gap_rel = (report.simulated_cov - target.cov).norm() / denom;
  report.max_mean_se = std::sqrt(report.simulated_cov.diagonal().maxCoeff() /
                                 static_cast<double>(replicates));
  return report;
}

}  // namespace causalvar
