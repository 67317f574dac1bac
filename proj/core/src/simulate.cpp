#include "causalvar/simulate.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "causalvar/errors.hpp"
#include "causalvar/rng.hpp"
#include "causalvar/stability.hpp"

namespace causalvar {

namespace {

constexpr double kOverflowLimit = 1e100;

Eigen::MatrixXd resolve_initial_state(const VarModel& model, const SimConfig& cfg) {
  const int d = model.dim();
  const int p = model.lag();
  if (cfg.initial_state) {
    if (cfg.initial_state->rows() != p || cfg.initial_state->cols() != d) {
      throw domain_error("initial_state must be lag x dim (" + std::to_string(p) + "x" +
                         std::to_string(d) + ")");
    }
    return *cfg.initial_state;
  }
  StabilityReport st = check_stability(model);
  Eigen::RowVectorXd base = Eigen::RowVectorXd::Zero(d);
  if (st.stable) base = process_mean(model).transpose();
  return base.colwise().replicate(p);
}

void check_finite_row(const Eigen::RowVectorXd& x, long step, const char* phase) {
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    double v = x[j];
    if (!std::isfinite(v) || std::abs(v) > kOverflowLimit) {
      throw numerical_error(std::string("simulation overflow at ") + phase + " step " +
                            std::to_string(step) + ", component " + std::to_string(j));
    }
  }
}

// One recursion step: x_t' = nu + sum_k B_k x_{t-k}' + shock'.
// `history` rows are chronological with the newest observation last.
Eigen::RowVectorXd step(const VarModel& model, const Eigen::MatrixXd& history,
                        long newest_row, const Eigen::VectorXd& shock) {
  const int p = model.lag();
  Eigen::VectorXd x = model.intercept + shock;
  for (int k = 1; k <= p; ++k) {
    x.noalias() += model.coeffs[static_cast<std::size_t>(k - 1)] *
                   history.row(newest_row - (k - 1)).transpose();
  }
  return x.transpose();
}

}  // namespace

SimulationWithShocks simulate_with_shocks(const VarModel& model, const SimConfig& cfg) {
  model.validate();
  if (cfg.length < 0) throw domain_error("simulation length must be >= 0");
  if (cfg.burn_in < 0) throw domain_error("burn_in must be >= 0");
  const int d = model.dim();
  const int p = model.lag();
  const long total = cfg.burn_in + cfg.length;

  // Rolling buffer: rows 0..p-1 presample, then one row per generated step.
  Eigen::MatrixXd buf(p + total, d);
  buf.topRows(p) = resolve_initial_state(model, cfg);

  SplitMix64 rng = SplitMix64::for_stream(cfg.seed, cfg.stream);
  GaussianSampler sampler(model.noise_cov);

  SimulationWithShocks out;
  out.series.values.resize(cfg.length, d);
  out.series.start_index = 0;
  out.shocks.values.resize(cfg.length, d);
  out.shocks.start_index = 0;

  for (long t = 0; t < total; ++t) {
    Eigen::VectorXd u = sampler.draw(rng);
    Eigen::RowVectorXd x = step(model, buf, p + t - 1, u);
    long out_step = t - cfg.burn_in;
    check_finite_row(x, out_step < 0 ? t : out_step, out_step < 0 ? "burn-in" : "output");
    buf.row(p + t) = x;
    if (out_step >= 0) {
      out.series.values.row(out_step) = x;
      out.shocks.values.row(out_step) = u.transpose();
    }
  }
  return out;
}

TimeSeries simulate(const VarModel& model, const SimConfig& cfg) {
  return simulate_with_shocks(model, cfg).series;
}

CoupledSimulation simulate_intervened(const VarModel& model, const Intervention& iv,
                                      const SimConfig& cfg) {
  model.validate();
  validate_intervention(model, iv);
  if (cfg.length < 0) throw domain_error("simulation length must be >= 0");
  if (cfg.burn_in < 0) throw domain_error("burn_in must be >= 0");
  const int d = model.dim();
  const int p = model.lag();
  const long total = cfg.burn_in + cfg.length;

  VarModel altered = intervened_model(model, iv);
  Eigen::MatrixXd filter = noise_transform(model, iv);

  Eigen::MatrixXd fact(p + total, d);
  fact.topRows(p) = resolve_initial_state(model, cfg);
  Eigen::MatrixXd intv = fact;

  SplitMix64 rng = SplitMix64::for_stream(cfg.seed, cfg.stream);
  GaussianSampler sampler(model.noise_cov);

  CoupledSimulation out;
  out.factual.values.resize(cfg.length, d);
  out.intervened.values.resize(cfg.length, d);

  for (long t = 0; t < total; ++t) {
    Eigen::VectorXd u = sampler.draw(rng);
    long out_step = t - cfg.burn_in;
    const char* phase = out_step < 0 ? "burn-in" : "output";
    long report_step = out_step < 0 ? t : out_step;

    Eigen::RowVectorXd xf = step(model, fact, p + t - 1, u);
    check_finite_row(xf, report_step, phase);
    fact.row(p + t) = xf;

    Eigen::RowVectorXd xi;
    if (out_step >= iv.start) {
      Eigen::VectorXd fu = filter * u;
      xi = step(altered, intv, p + t - 1, fu);
    } else {
      xi = step(model, intv, p + t - 1, u);
    }
    check_finite_row(xi, report_step, phase);
    intv.row(p + t) = xi;

    if (out_step >= 0) {
      out.factual.values.row(out_step) = xf;
      out.intervened.values.row(out_step) = xi;
    }
  }
  return out;
}

}  // namespace causalvar
