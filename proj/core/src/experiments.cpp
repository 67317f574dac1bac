#include "causalvar/experiments.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "causalvar/datasets.hpp"
#include "causalvar/errors.hpp"
#include "causalvar/estimate.hpp"
#include "causalvar/forecast.hpp"
#include "causalvar/rng.hpp"
#include "causalvar/simulate.hpp"
#include "causalvar/stability.hpp"
#include "parallel.hpp"

namespace causalvar {

namespace {

struct DatasetHandles {
  StructuralVarModel structural;
  VarModel model;
};

DatasetHandles resolve_dataset(const ExperimentSpec& spec) {
  DatasetHandles h;
  if (spec.dataset == "german") {
    h.structural = german_structural(spec.sigma);
  } else if (spec.dataset == "pendulum") {
    h.structural = pendulum_structural(spec.sigma);
  } else {
    throw domain_error("unknown dataset '" + spec.dataset + "'");
  }
  h.model = svar_to_var(h.structural);
  return h;
}

std::vector<int> resolve_targets(const ExperimentSpec& spec, int dim) {
  std::vector<int> t = spec.targets;
  if (t.empty()) {
    for (int j = 0; j < dim; ++j) t.push_back(j);
  }
  for (int j : t) {
    if (j < 0 || j >= dim) throw domain_error("target component out of range");
  }
  return t;
}

FitOptions resolve_fit(const ExperimentSpec& spec, const DatasetHandles& data) {
  FitOptions opts;
  opts.lag = spec.fit_lag > 0 ? spec.fit_lag : data.model.lag();
  if (spec.constrain_graph) {
    opts.graph = induced_graph(data.structural);
  }
  return opts;
}

RunSummary summarize(const std::vector<double>& values) {
  RunSummary s;
  const double n = static_cast<double>(values.size());
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double acc = 0.0;
    for (double v : values) acc += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(acc / (n - 1.0));
  }
  return s;
}

// h-step-ahead means only; the full covariance recursion is wasted work in a
// rolling-origin loop.
Eigen::RowVectorXd mean_ahead(const VarModel& m, const Eigen::MatrixXd& data,
                              long origin, int h) {
  const int p = m.lag();
  const int d = m.dim();
  Eigen::MatrixXd window(p, d);  // newest first
  for (int k = 0; k < p; ++k) window.row(k) = data.row(origin - k);
  for (int step = 0; step < h; ++step) {
    Eigen::VectorXd x = m.intercept;
    for (int k = 0; k < p; ++k) {
      x.noalias() += m.coeffs[static_cast<std::size_t>(k)] * window.row(k).transpose();
    }
    for (int k = p - 1; k > 0; --k) window.row(k) = window.row(k - 1);
    window.row(0) = x.transpose();
  }
  return window.row(0);
}

}  // namespace

ObservationalResult run_observational(const ExperimentSpec& spec) {
  if (spec.n_runs < 1) throw domain_error("n_runs must be >= 1");
  if (spec.train_size < 1 || spec.test_size < 1) {
    throw domain_error("train_size and test_size must be >= 1");
  }
  if (spec.horizon < 1) throw domain_error("horizon must be >= 1");
  DatasetHandles data = resolve_dataset(spec);
  const int d = data.model.dim();
  std::vector<int> targets = resolve_targets(spec, d);
  FitOptions fit_opts = resolve_fit(spec, data);

  ObservationalResult out;
  out.fitted_runs.resize(static_cast<std::size_t>(spec.n_runs));
  out.oracle_runs.resize(static_cast<std::size_t>(spec.n_runs));

  const long total = spec.train_size + spec.test_size + spec.horizon;

  // Runs are embarrassingly parallel; each draws its own substream.
  detail::parallel_for(spec.n_runs, [&](long r) {
    SimConfig cfg;
    cfg.length = total;
    cfg.seed = spec.seed;
    cfg.stream = static_cast<std::uint64_t>(r);
    TimeSeries path = simulate(data.model, cfg);

    TimeSeries train;
    train.start_index = 0;
    train.values = path.values.topRows(spec.train_size);
    VarModel fitted = fit(train, fit_opts).model;

    const long n_origins = spec.test_size;
    Eigen::MatrixXd pred_f(n_origins, d), pred_o(n_origins, d), truth(n_origins, d);
    for (long i = 0; i < n_origins; ++i) {
      long origin = spec.train_size - 1 + i;
      pred_f.row(i) = mean_ahead(fitted, path.values, origin, spec.horizon);
      pred_o.row(i) = mean_ahead(data.model, path.values, origin, spec.horizon);
      truth.row(i) = path.values.row(origin + spec.horizon);
    }
    out.fitted_runs[static_cast<std::size_t>(r)] = metrics(pred_f, truth, targets);
    out.oracle_runs[static_cast<std::size_t>(r)] = metrics(pred_o, truth, targets);
  });

  auto collect = [](const std::vector<MetricReport>& runs, auto pick) {
    std::vector<double> v;
    v.reserve(runs.size());
    for (const auto& m : runs) v.push_back(pick(m));
    return summarize(v);
  };
  out.fitted_mae = collect(out.fitted_runs, [](const MetricReport& m) { return m.mae; });
  out.fitted_rmse = collect(out.fitted_runs, [](const MetricReport& m) { return m.rmse; });
  out.fitted_smape = collect(out.fitted_runs, [](const MetricReport& m) { return m.smape; });
  out.oracle_mae = collect(out.oracle_runs, [](const MetricReport& m) { return m.mae; });
  out.oracle_rmse = collect(out.oracle_runs, [](const MetricReport& m) { return m.rmse; });
  out.oracle_smape = collect(out.oracle_runs, [](const MetricReport& m) { return m.smape; });
  return out;
}

InterventionalResult run_interventional(const ExperimentSpec& spec) {
  if (!spec.intervention) {
    throw domain_error("run_interventional needs spec.intervention");
  }
  if (spec.n_runs < 1) throw domain_error("n_runs must be >= 1");
  if (spec.horizon < 1) throw domain_error("horizon must be >= 1");
  DatasetHandles data = resolve_dataset(spec);
  const int d = data.model.dim();
  std::vector<int> targets = resolve_targets(spec, d);
  FitOptions fit_opts = resolve_fit(spec, data);
  const Intervention& iv = *spec.intervention;

  InterventionalResult out;
  out.per_run_error.resize(spec.n_runs, spec.horizon);

  detail::parallel_for(spec.n_runs, [&](long r) {
    SimConfig cfg;
    cfg.length = spec.train_size;
    cfg.seed = spec.seed;
    cfg.stream = static_cast<std::uint64_t>(r);
    TimeSeries train = simulate(data.model, cfg);

    VarModel fitted = fit(train, fit_opts).model;

    // Path row h-1 is the effect h steps into the intervention.
    CausalEffectPath truth = causal_effect_path(data.model, iv, train, spec.horizon - 1);
    CausalEffectPath est = causal_effect_path(fitted, iv, train, spec.horizon - 1);
    for (int h = 0; h < spec.horizon; ++h) {
      double err = 0.0;
      for (int j : targets) err += std::abs(est.effects(h, j) - truth.effects(h, j));
      out.per_run_error(r, h) = err / static_cast<double>(targets.size());
    }
  });

  out.mean_error = out.per_run_error.colwise().mean().transpose();
  out.sd_error = Eigen::VectorXd::Zero(spec.horizon);
  if (spec.n_runs > 1) {
    for (int h = 0; h < spec.horizon; ++h) {
      double acc = 0.0;
      for (int r = 0; r < spec.n_runs; ++r) {
        double delta = out.per_run_error(r, h) - out.mean_error[h];
        acc += delta * delta;
      }
      out.sd_error[h] = std::sqrt(acc / static_cast<double>(spec.n_runs - 1));
    }
  }

  // Scale reference from the generator's long-run effect.
  SimConfig cfg;
  cfg.length = std::max<long>(data.model.lag(), 8);
  cfg.seed = spec.seed;
  TimeSeries hist = simulate(data.model, cfg);
  CausalEffectPath truth = causal_effect_path(data.model, iv, hist, 0);
  out.asymptote_valid = truth.asymptote_valid;
  if (truth.asymptote_valid) {
    double acc = 0.0;
    for (int j : targets) acc += std::abs(truth.asymptote[j]);
    out.asymptote_scale = acc / static_cast<double>(targets.size());
  } else {
    out.asymptote_scale = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

CrossingReport run_usecase_crossing(const ExperimentSpec& spec) {
  if (spec.horizon < 1) throw domain_error("horizon must be >= 1");
  if (spec.n_entities < 1) throw domain_error("n_entities must be >= 1");
  DatasetHandles data = resolve_dataset(spec);
  const int d = data.model.dim();
  if (spec.crossing_target < 0 || spec.crossing_target >= d) {
    throw domain_error("crossing_target out of range");
  }
  if (spec.history_length < data.model.lag()) {
    throw domain_error("history_length must cover the model lag");
  }

  GeneratorConfig gen;
  gen.sigma = spec.sigma;
  GeneratedPanel panel = spec.dataset == "german"
      ? generate_german(spec.seed, spec.history_length, spec.n_entities, gen)
      : generate_pendulum(spec.seed, spec.history_length, spec.n_entities, gen);

  CrossingReport report;
  report.histogram.assign(static_cast<std::size_t>(spec.horizon) + 1, 0);
  report.records.reserve(panel.panel.entities.size());

  for (const auto& entity : panel.panel.entities) {
    Forecast fc = spec.intervention
        ? forecast_intervened(data.model, *spec.intervention, entity.series, spec.horizon)
        : forecast(data.model, entity.series, spec.horizon);

    CrossingReport::Record rec;
    rec.entity = entity.id;
    double origin_value = entity.series.values(entity.series.length() - 1, spec.crossing_target);
    if (origin_value >= spec.threshold) {
      rec.crossed = true;
      rec.time = 0;
    } else {
      rec.crossed = false;
      for (int k = 0; k < spec.horizon; ++k) {
        if (fc.means(k, spec.crossing_target) >= spec.threshold) {
          rec.crossed = true;
          rec.time = k + 1;
          break;
        }
      }
    }
    if (rec.crossed) {
      report.histogram[static_cast<std::size_t>(rec.time)] += 1;
    } else {
      report.never_count += 1;
    }
    report.records.push_back(std::move(rec));
  }
  return report;
}

}  // namespace causalvar
