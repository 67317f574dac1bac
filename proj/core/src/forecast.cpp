#include "causalvar/forecast.hpp"

#include <cmath>
#include <limits>

#include "causalvar/errors.hpp"
#include "causalvar/stability.hpp"

namespace causalvar {

namespace {

void check_history(const VarModel& model, const TimeSeries& history) {
  if (history.dim() != model.dim()) {
    throw domain_error("forecast: history dimension does not match the model");
  }
  if (history.length() < model.lag()) {
    throw domain_error("forecast: history must cover at least lag=" +
                       std::to_string(model.lag()) + " observations");
  }
}

// Shared mean/covariance roll-forward. `switch_at` is the zero-based forecast
// step at which `post` takes over from `pre`; steps 0..switch_at-1 use pre.
// Covariances propagate through the companion state so shocks injected under
// one regime are carried correctly through the other.
Forecast roll(const VarModel& pre, const VarModel& post, long switch_at,
              const TimeSeries& history, int horizon) {
  const int d = pre.dim();
  const int p = pre.lag();

  Forecast out;
  out.means.resize(horizon, d);
  out.covariances.reserve(static_cast<std::size_t>(horizon));

  // Newest-first lag window seeded from history.
  Eigen::MatrixXd window(p, d);
  for (int k = 0; k < p; ++k) {
    window.row(k) = history.values.row(history.length() - 1 - k);
  }

  Eigen::MatrixXd state_cov = Eigen::MatrixXd::Zero(d * p, d * p);

  for (int step = 0; step < horizon; ++step) {
    const VarModel& m = step >= switch_at ? post : pre;
    Eigen::VectorXd mean = m.intercept;
    for (int k = 0; k < p; ++k) {
      mean.noalias() += m.coeffs[static_cast<std::size_t>(k)] * window.row(k).transpose();
    }
    for (int k = p - 1; k > 0; --k) window.row(k) = window.row(k - 1);
    window.row(0) = mean.transpose();
    out.means.row(step) = mean.transpose();

    // state_cov <- A state_cov A' + E Sigma E'
    Eigen::MatrixXd top = Eigen::MatrixXd::Zero(d, d * p);
    for (int k = 0; k < p; ++k) {
      top.block(0, k * d, d, d) = m.coeffs[static_cast<std::size_t>(k)];
    }
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(d * p, d * p);
    Eigen::MatrixXd top_sc = top * state_cov;             // d x dp
    next.block(0, 0, d, d) = top_sc * top.transpose() + m.noise_cov;
    if (p > 1) {
      next.block(0, d, d, d * (p - 1)) = top_sc.leftCols(d * (p - 1));
      next.block(d, 0, d * (p - 1), d) = next.block(0, d, d, d * (p - 1)).transpose();
      next.block(d, d, d * (p - 1), d * (p - 1)) =
          state_cov.topLeftCorner(d * (p - 1), d * (p - 1));
    }
    state_cov = 0.5 * (next + next.transpose());
    out.covariances.push_back(state_cov.topLeftCorner(d, d));
  }
  return out;
}

}  // namespace

Forecast forecast(const VarModel& model, const TimeSeries& history, int horizon) {
  model.validate();
  check_history(model, history);
  if (horizon < 1) throw domain_error("forecast: horizon must be >= 1");
  Forecast out = roll(model, model, horizon, history, horizon);
  out.unstable_dynamics = !check_stability(model).stable;
  return out;
}

Forecast forecast_intervened(const VarModel& model, const Intervention& iv,
                             const TimeSeries& history, int horizon) {
  model.validate();
  validate_intervention(model, iv);
  check_history(model, history);
  if (horizon < 1) throw domain_error("forecast: horizon must be >= 1");
  VarModel altered = intervened_model(model, iv);
  Forecast out = roll(model, altered, iv.start, history, horizon);
  const VarModel& tail_model = iv.start < horizon ? altered : model;
  out.unstable_dynamics = !check_stability(tail_model).stable;
  return out;
}

CausalEffectPath causal_effect_path(const VarModel& model, const Intervention& iv,
                                    const TimeSeries& history, int horizon) {
  model.validate();
  validate_intervention(model, iv);
  if (horizon < 0) throw domain_error("causal_effect_path: horizon must be >= 0");
  const int d = model.dim();

  CausalEffectPath out;
  out.effects.resize(horizon + 1, d);
  out.asymptote = Eigen::VectorXd::Constant(d, std::numeric_limits<double>::quiet_NaN());

  VarModel altered = intervened_model(model, iv);
  StabilityReport base_st = check_stability(model);
  StabilityReport alt_st = check_stability(altered);

  if (iv.kind == InterventionKind::additive) {
    // Deterministic path: partial sums of the MA weights times the shift.
    std::vector<Eigen::MatrixXd> phi = ma_coefficients(model, horizon);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
    for (int k = 0; k <= horizon; ++k) {
      acc += phi[static_cast<std::size_t>(k)] * iv.force;
      out.effects.row(k) = acc.transpose();
    }
    if (base_st.stable) {
      out.asymptote = long_run_matrix(model).matrix * iv.force;
      out.asymptote_valid = true;
    }
    return out;
  }

  check_history(model, history);
  Intervention from_start = iv;
  from_start.start = 0;
  Forecast with = forecast_intervened(model, from_start, history, horizon + 1);
  Forecast without = forecast(model, history, horizon + 1);
  out.effects = with.means - without.means;
  if (base_st.stable && alt_st.stable) {
    out.asymptote = process_mean(altered) - process_mean(model);
    out.asymptote_valid = true;
  }
  return out;
}

}  // namespace causalvar
