#include "causalvar/datasets.hpp"

#include <cmath>
#include <cstdio>

#include "causalvar/errors.hpp"
#include "causalvar/simulate.hpp"

namespace causalvar {

namespace {

GeneratedPanel simulate_panel(const StructuralVarModel& structural, std::uint64_t seed,
                              long length, int n_entities, long burn_in) {
  if (n_entities < 1) throw domain_error("panel needs at least one entity");
  GeneratedPanel out;
  out.model = svar_to_var(structural);
  out.panel.entities.reserve(static_cast<std::size_t>(n_entities));
  for (int e = 0; e < n_entities; ++e) {
    SimConfig cfg;
    cfg.length = length;
    cfg.burn_in = burn_in;
    cfg.seed = seed;
    cfg.stream = static_cast<std::uint64_t>(e);
    char id[16];
    std::snprintf(id, sizeof(id), "e%04d", e);
    out.panel.entities.push_back({id, simulate(out.model, cfg)});
  }
  return out;
}

}  // namespace

const std::vector<std::string>& german_variable_names() {
  static const std::vector<std::string> names = {
      "expertise",   "responsibility", "loan_amount", "loan_duration",
      "income",      "savings",        "credit_score"};
  return names;
}

StructuralVarModel german_structural(double sigma) {
  const int d = 7;
  // Component indices.
  enum { E = 0, R = 1, L = 2, D = 3, I = 4, S = 5, C = 6 };

  StructuralVarModel m;
  m.intercept = Eigen::VectorXd::Zero(d);
  m.noise_cov = sigma * sigma * Eigen::MatrixXd::Identity(d, d);

  // Cause-row layout throughout: entry (i, j) drives component j from i.
  m.instantaneous = Eigen::MatrixXd::Zero(d, d);
  m.instantaneous(D, C) = 0.5;
  m.instantaneous(I, C) = -0.3;
  m.instantaneous(S, C) = -0.5;

  m.lag_coeffs.assign(4, Eigen::MatrixXd::Zero(d, d));
  for (int j = 0; j < d - 1; ++j) m.lag_coeffs[0](j, j) = 0.95;  // score has no memory
  m.lag_coeffs[1](R, I) = 0.3;
  m.lag_coeffs[1](L, C) = 0.5;
  m.lag_coeffs[1](I, S) = 0.2;
  m.lag_coeffs[2](L, D) = 0.5;
  m.lag_coeffs[3](E, R) = 0.3;
  m.lag_coeffs[3](E, I) = 0.8;
  return m;
}

GeneratedPanel generate_german(std::uint64_t seed, long length, int n_entities,
                               const GeneratorConfig& cfg) {
  return simulate_panel(german_structural(cfg.sigma), seed, length, n_entities,
                        cfg.burn_in);
}

const std::vector<std::string>& pendulum_variable_names() {
  static const std::vector<std::string> names = {"angle", "velocity"};
  return names;
}

StructuralVarModel pendulum_structural(double sigma) {
  const double r = std::sqrt(2.0);
  StructuralVarModel m;
  m.intercept = Eigen::VectorXd::Zero(2);
  m.noise_cov = sigma * sigma * Eigen::MatrixXd::Identity(2, 2);
  m.instantaneous = Eigen::MatrixXd::Zero(2, 2);
  m.lag_coeffs.assign(1, Eigen::MatrixXd::Zero(2, 2));
  // Cause-row: component 0 damps component 1, which feeds back positively on
  // itself and on component 0.
  m.lag_coeffs[0](0, 1) = -0.5 * r;
  m.lag_coeffs[0](1, 0) = 0.5 * r;
  m.lag_coeffs[0](1, 1) = r;
  return m;
}

GeneratedPanel generate_pendulum(std::uint64_t seed, long length, int n_entities,
                                 const GeneratorConfig& cfg) {
  return simulate_panel(pendulum_structural(cfg.sigma), seed, length, n_entities,
                        cfg.burn_in);
}

}  // namespace causalvar
