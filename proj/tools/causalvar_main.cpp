// Command line front end: simulation, estimation, stability queries,
// forecasts, interventions, counterfactuals and the benchmark runners.
//
// Exit codes: 0 success, 2 usage error, 3 domain or input error, 4 numerical
// failure.

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "causalvar/counterfactual.hpp"
#include "causalvar/csv.hpp"
#include "causalvar/datasets.hpp"
#include "causalvar/errors.hpp"
#include "causalvar/estimate.hpp"
#include "causalvar/experiments.hpp"
#include "causalvar/forecast.hpp"
#include "causalvar/intervention.hpp"
#include "causalvar/io_json.hpp"
#include "causalvar/model.hpp"
#include "causalvar/scm.hpp"
#include "causalvar/simulate.hpp"
#include "causalvar/stability.hpp"

using namespace causalvar;
using nlohmann::json;

namespace {

// Every writer accepts a path; an empty --out means the process stdout.
std::string out_or_stdout(const std::string& out) {
  return out.empty() ? "/dev/stdout" : out;
}

void write_text(const std::string& out, const std::string& text) {
  std::ofstream os(out_or_stdout(out));
  if (!os) throw parse_error("cannot open '" + out + "' for writing");
  os << text;
}

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_entries(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

int dataset_dim(const std::string& name) { return name == "german" ? 7 : 2; }

GeneratedPanel make_dataset(const std::string& name, std::uint64_t seed, long length,
                            int entities, const GeneratorConfig& cfg) {
  if (name == "german") return generate_german(seed, length, entities, cfg);
  return generate_pendulum(seed, length, entities, cfg);
}

const std::vector<std::string>& dataset_names(const std::string& name) {
  return name == "german" ? german_variable_names() : pendulum_variable_names();
}

bool is_panel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);
  return header.rfind("entity,", 0) == 0;
}

Intervention load_iv(const std::string& path, int dim) {
  return load_intervention_json(path, dim);
}

std::string effect_path_csv(const CausalEffectPath& path) {
  const int d = static_cast<int>(path.effects.cols());
  std::string s = "k";
  for (int j = 0; j < d; ++j) s += ",ce_" + std::to_string(j);
  s += "\n";
  for (long k = 0; k < path.effects.rows(); ++k) {
    s += std::to_string(k);
    for (int j = 0; j < d; ++j) s += "," + format_double(path.effects(k, j));
    s += "\n";
  }
  return s;
}

std::string effect_path_json(const CausalEffectPath& path) {
  json j;
  j["horizon"] = path.effects.rows() - 1;
  j["effects"] = matrix_rows(path.effects);
  j["asymptote_valid"] = path.asymptote_valid;
  j["asymptote"] =
      path.asymptote_valid ? vector_entries(path.asymptote) : json(nullptr);
  return j.dump(2) + "\n";
}

std::string counterfactual_csv(const CounterfactualResult& res) {
  const int d = res.factual.dim();
  std::string s = "t";
  for (int j = 0; j < d; ++j) s += ",factual_" + std::to_string(j);
  for (int j = 0; j < d; ++j) s += ",counterfactual_" + std::to_string(j);
  for (int j = 0; j < d; ++j) s += ",effect_" + std::to_string(j);
  s += "\n";
  for (long r = 0; r < res.factual.length(); ++r) {
    s += std::to_string(res.factual.start_index + r);
    for (int j = 0; j < d; ++j) s += "," + format_double(res.factual.values(r, j));
    for (int j = 0; j < d; ++j) {
      s += "," + format_double(res.counterfactual.values(r, j));
    }
    for (int j = 0; j < d; ++j) s += "," + format_double(res.effect.values(r, j));
    s += "\n";
  }
  return s;
}

std::string counterfactual_json(const CounterfactualResult& res) {
  json j;
  j["from"] = res.factual.start_index;
  j["to"] = res.factual.start_index + res.factual.length() - 1;
  j["factual"] = matrix_rows(res.factual.values);
  j["counterfactual"] = matrix_rows(res.counterfactual.values);
  j["effect"] = matrix_rows(res.effect.values);
  json diag;
  diag["residual_mean"] = vector_entries(res.diagnostics.mean);
  diag["residual_cov"] = matrix_rows(res.diagnostics.covariance);
  diag["ljung_box"] = vector_entries(res.diagnostics.ljung_box);
  diag["lags"] = res.diagnostics.lags;
  j["diagnostics"] = std::move(diag);
  return j.dump(2) + "\n";
}

json intervention_meta(const Intervention& iv) {
  json j;
  switch (iv.kind) {
    case InterventionKind::additive: j["kind"] = "additive"; break;
    case InterventionKind::forcing: j["kind"] = "forcing"; break;
    case InterventionKind::assignment: j["kind"] = "do"; break;
  }
  j["force"] = vector_entries(iv.force);
  if (iv.target.size() > 0) j["target"] = vector_entries(iv.target);
  j["start"] = iv.start;
  return j;
}

json spec_meta(const ExperimentSpec& spec, const std::string& runner) {
  json j;
  j["runner"] = runner;
  j["version"] = CAUSALVAR_CLI_VERSION;
  j["dataset"] = spec.dataset;
  j["sigma"] = spec.sigma;
  j["seed"] = spec.seed;
  j["train_size"] = spec.train_size;
  j["test_size"] = spec.test_size;
  j["horizon"] = spec.horizon;
  j["n_runs"] = spec.n_runs;
  j["fit_lag"] = spec.fit_lag;
  j["constrain_graph"] = spec.constrain_graph;
  j["targets"] = spec.targets;
  if (spec.intervention) j["intervention"] = intervention_meta(*spec.intervention);
  return j;
}

void write_meta_sidecar(const std::string& out, const json& meta) {
  if (out.empty()) return;  // tables on stdout carry no sidecar
  write_text(out + ".meta.json", meta.dump(2) + "\n");
}

std::string summary_cell(const RunSummary& s) {
  return format_double(s.mean) + "," + format_double(s.sd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "causalvar: linear vector autoregressions as causal models.\n"
      "Simulates, fits and forecasts lagged processes, transforms them under\n"
      "additive, forcing and do interventions, replays counterfactuals and\n"
      "maps stable processes to their equilibrium structural model."};
  app.require_subcommand(1);
  app.set_version_flag("--version", CAUSALVAR_CLI_VERSION);

  // Shared flags; subcommands that skip one simply ignore it.
  std::uint64_t seed = 0;
  std::string model_path, data_path, out_path, iv_path;
  std::string format = "csv";
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  app.add_option("--model", model_path, "process model JSON file");
  app.add_option("--data", data_path, "trajectory or panel CSV file");
  app.add_option("--out", out_path, "output file (stdout when omitted)");
  app.add_option("--format", format, "table output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  // simulate
  auto* sim = app.add_subcommand(
      "simulate", "draw trajectories from a bundled generator or a model file");
  sim->fallthrough();
  std::string sim_dataset;
  long sim_length = 0, sim_burn_in = 200;
  int sim_entities = 1;
  double sim_sigma = 0.1;
  std::string sim_model_out;
  sim->add_option("--dataset", sim_dataset, "bundled generator")
      ->check(CLI::IsMember({"german", "pendulum"}));
  sim->add_option("--length", sim_length, "observations per entity")
      ->required()
      ->check(CLI::PositiveNumber);
  sim->add_option("--entities", sim_entities, "number of trajectories")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim->add_option("--burn-in", sim_burn_in, "discarded warmup steps")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sim->add_option("--sigma", sim_sigma, "generator shock scale")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim->add_option("--model-out", sim_model_out,
                  "also write the generating model JSON here");
  sim->callback([&] {
    if (!sim_dataset.empty()) {
      GeneratorConfig cfg;
      cfg.sigma = sim_sigma;
      cfg.burn_in = sim_burn_in;
      auto gen = make_dataset(sim_dataset, seed, sim_length, sim_entities, cfg);
      save_panel_csv(gen.panel, out_or_stdout(out_path), dataset_names(sim_dataset));
      if (!sim_model_out.empty()) save_model_json(gen.model, sim_model_out);
      return;
    }
    if (model_path.empty()) {
      throw CLI::ValidationError("simulate", "either --dataset or --model is required");
    }
    auto model = load_model_json(model_path);
    PanelSeries panel;
    for (int e = 0; e < sim_entities; ++e) {
      SimConfig cfg;
      cfg.length = sim_length;
      cfg.burn_in = sim_burn_in;
      cfg.seed = seed;
      cfg.stream = static_cast<std::uint64_t>(e);
      char id[16];
      std::snprintf(id, sizeof(id), "e%04d", e);
      panel.entities.push_back({id, simulate(model, cfg)});
    }
    save_panel_csv(panel, out_or_stdout(out_path));
    if (!sim_model_out.empty()) save_model_json(model, sim_model_out);
  });

  // fit
  auto* fit_cmd = app.add_subcommand(
      "fit", "least squares fit of a lag model to --data, model JSON to --out");
  fit_cmd->fallthrough();
  int fit_lag = 1, fit_select_max = 0;
  double fit_ridge = 0.0;
  bool fit_no_intercept = false;
  std::string fit_criterion = "bic", fit_sidecar;
  fit_cmd->add_option("--lag", fit_lag, "model order")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit_cmd->add_option("--select-lag", fit_select_max,
                      "pick the order in 1..N by information criterion");
  fit_cmd->add_option("--criterion", fit_criterion, "order selection criterion")
      ->check(CLI::IsMember({"aic", "bic"}))
      ->capture_default_str();
  fit_cmd->add_option("--ridge", fit_ridge, "ridge penalty on lag coefficients")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  fit_cmd->add_flag("--no-intercept", fit_no_intercept, "fit without a constant term");
  fit_cmd->add_option("--sidecar", fit_sidecar,
                      "write information criteria JSON here");
  fit_cmd->callback([&] {
    if (data_path.empty()) throw CLI::ValidationError("fit", "--data is required");
    FitOptions opts;
    opts.lag = fit_lag;
    opts.include_intercept = !fit_no_intercept;
    opts.ridge = fit_ridge;
    const auto crit =
        fit_criterion == "aic" ? InfoCriterion::aic : InfoCriterion::bic;
    FitReport rep;
    if (is_panel_file(data_path)) {
      auto loaded = load_panel_csv(data_path);
      if (fit_select_max > 0) opts.lag = select_lag(loaded.panel, fit_select_max, crit, opts);
      rep = fit(loaded.panel, opts);
    } else {
      auto loaded = load_series_csv(data_path);
      if (fit_select_max > 0) opts.lag = select_lag(loaded.series, fit_select_max, crit, opts);
      rep = fit(loaded.series, opts);
    }
    save_model_json(rep.model, out_or_stdout(out_path));
    if (!fit_sidecar.empty()) save_fit_sidecar_json(rep, fit_sidecar);
  });

  // stability
  auto* stab = app.add_subcommand("stability", "report the spectral radius of --model");
  stab->fallthrough();
  stab->callback([&] {
    if (model_path.empty()) {
      throw CLI::ValidationError("stability", "--model is required");
    }
    auto model = load_model_json(model_path);
    auto rep = check_stability(model);
    std::string text = "spectral radius " + format_double(rep.spectral_radius) + "\n";
    text += std::string("stable ") + (rep.stable ? "yes" : "no") + "\n";
    text += "root moduli";
    for (double m : rep.root_moduli) text += " " + format_double(m);
    text += "\n";
    write_text(out_path, text);
  });

  // forecast
  auto* fc_cmd = app.add_subcommand(
      "forecast", "conditional means and error variances past the end of --data");
  fc_cmd->fallthrough();
  int fc_horizon = 10;
  fc_cmd->add_option("--horizon", fc_horizon, "steps ahead")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fc_cmd->add_option("--intervention", iv_path, "intervention JSON file");
  fc_cmd->callback([&] {
    if (model_path.empty() || data_path.empty()) {
      throw CLI::ValidationError("forecast", "--model and --data are required");
    }
    auto model = load_model_json(model_path);
    auto history = load_series_csv(data_path).series;
    Forecast fc;
    if (!iv_path.empty()) {
      fc = forecast_intervened(model, load_iv(iv_path, model.dim()), history,
                               fc_horizon);
    } else {
      fc = forecast(model, history, fc_horizon);
    }
    if (format == "json") {
      save_forecast_json(fc, out_or_stdout(out_path));
    } else {
      save_forecast_csv(fc, out_or_stdout(out_path));
    }
  });

  // intervene
  auto* ivm = app.add_subcommand(
      "intervene", "write the intervention-transformed model as JSON");
  ivm->fallthrough();
  ivm->add_option("--intervention", iv_path, "intervention JSON file");
  ivm->callback([&] {
    if (model_path.empty() || iv_path.empty()) {
      throw CLI::ValidationError("intervene", "--model and --intervention are required");
    }
    auto model = load_model_json(model_path);
    save_model_json(intervened_model(model, load_iv(iv_path, model.dim())),
                    out_or_stdout(out_path));
  });

  // ce
  auto* ce_cmd = app.add_subcommand(
      "ce", "expected intervened-minus-factual path, rows k = 0..horizon");
  ce_cmd->fallthrough();
  int ce_horizon = 10;
  ce_cmd->add_option("--horizon", ce_horizon, "last effect step")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  ce_cmd->add_option("--intervention", iv_path, "intervention JSON file");
  ce_cmd->callback([&] {
    if (model_path.empty() || iv_path.empty()) {
      throw CLI::ValidationError("ce", "--model and --intervention are required");
    }
    auto model = load_model_json(model_path);
    // Additive effects need no history; forcing and do read it from --data.
    TimeSeries history;
    history.values.resize(0, model.dim());
    if (!data_path.empty()) history = load_series_csv(data_path).series;
    auto path =
        causal_effect_path(model, load_iv(iv_path, model.dim()), history, ce_horizon);
    write_text(out_path,
               format == "json" ? effect_path_json(path) : effect_path_csv(path));
  });

  // counterfact
  auto* cf_cmd = app.add_subcommand(
      "counterfact", "replay an observed window under modified equations");
  cf_cmd->fallthrough();
  long cf_from = 0, cf_to = 0;
  cf_cmd->add_option("--intervention", iv_path, "intervention JSON file");
  cf_cmd->add_option("--from", cf_from, "first replayed time index")->required();
  cf_cmd->add_option("--to", cf_to, "last replayed time index")->required();
  cf_cmd->callback([&] {
    if (model_path.empty() || data_path.empty() || iv_path.empty()) {
      throw CLI::ValidationError(
          "counterfact", "--model, --data and --intervention are required");
    }
    auto model = load_model_json(model_path);
    auto trajectory = load_series_csv(data_path).series;
    auto res = counterfactual_trajectory(model, trajectory,
                                         load_iv(iv_path, model.dim()), cf_from, cf_to);
    write_text(out_path,
               format == "json" ? counterfactual_json(res) : counterfactual_csv(res));
  });

  // scm
  auto* scm_cmd = app.add_subcommand(
      "scm", "equilibrium structural model of a stable process, optionally intervened");
  scm_cmd->fallthrough();
  scm_cmd->add_option("--intervention", iv_path, "intervention JSON file");
  scm_cmd->callback([&] {
    if (model_path.empty()) throw CLI::ValidationError("scm", "--model is required");
    auto model = load_model_json(model_path);
    auto scm = to_equilibrium_scm(model);
    if (!iv_path.empty()) scm = scm_intervene(scm, load_iv(iv_path, model.dim()));
    save_scm_json(scm, out_or_stdout(out_path));
  });

  // verify-commutation
  auto* vc = app.add_subcommand(
      "verify-commutation",
      "check that intervening commutes with passing to the equilibrium model");
  vc->fallthrough();
  long vc_replicates = 2000, vc_length = 1000;
  vc->add_option("--intervention", iv_path,
                 "intervention JSON file (default: none)");
  vc->add_option("--replicates", vc_replicates, "independent trajectories")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  vc->add_option("--length", vc_length, "steps per trajectory")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  vc->callback([&] {
    if (model_path.empty()) {
      throw CLI::ValidationError("verify-commutation", "--model is required");
    }
    auto model = load_model_json(model_path);
    Intervention iv;
    iv.force = Eigen::VectorXd::Zero(model.dim());
    if (!iv_path.empty()) iv = load_iv(iv_path, model.dim());
    auto rep = verify_commutation(model, iv, vc_replicates, vc_length, seed);
    const double mean_tol = 3.0 * rep.max_mean_se;
    const double cov_tol = 0.1;
    std::string text;
    text += "replicates " + std::to_string(rep.replicates) + " length " +
            std::to_string(rep.length) + "\n";
    text += "max mean gap " + format_double(rep.max_mean_gap) + " (3 mc se = " +
            format_double(mean_tol) + ")\n";
    text += "cov gap rel " + format_double(rep.cov_gap_rel) + " (tolerance " +
            format_double(cov_tol) + ")\n";
    const bool ok = rep.max_mean_gap < mean_tol && rep.cov_gap_rel < cov_tol;
    text += ok ? "commutation holds\n" : "commutation gap exceeds tolerance\n";
    write_text(out_path, text);
  });

  // Benchmark runners share the experiment flags.
  ExperimentSpec spec;
  auto add_spec_flags = [&](CLI::App* sub) {
    sub->fallthrough();
    sub->add_option("--dataset", spec.dataset, "generator to benchmark")
        ->check(CLI::IsMember({"german", "pendulum"}))
        ->capture_default_str();
    sub->add_option("--sigma", spec.sigma, "generator shock scale")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--train-size", spec.train_size, "observations used for fitting")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--horizon", spec.horizon, "forecast steps ahead")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--runs", spec.n_runs, "independent repetitions")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--fit-lag", spec.fit_lag,
                    "fitted model order (0 = the generator's)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_flag("--constrain-graph", spec.constrain_graph,
                  "restrict fitting to the generator's edges");
    sub->add_option("--targets", spec.targets, "scored component indices")
        ->delimiter(',');
  };

  auto* bo = app.add_subcommand(
      "bench-observational", "forecast accuracy of fitted vs generating model");
  add_spec_flags(bo);
  bo->add_option("--test-size", spec.test_size, "rolling forecast origins")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bo->callback([&] {
    spec.seed = seed;
    auto res = run_observational(spec);
    std::string table = "model,mae_mean,mae_sd,rmse_mean,rmse_sd,smape_mean,smape_sd\n";
    table += "fitted," + summary_cell(res.fitted_mae) + "," +
             summary_cell(res.fitted_rmse) + "," + summary_cell(res.fitted_smape) + "\n";
    table += "oracle," + summary_cell(res.oracle_mae) + "," +
             summary_cell(res.oracle_rmse) + "," + summary_cell(res.oracle_smape) + "\n";
    write_text(out_path, table);
    write_meta_sidecar(out_path, spec_meta(spec, "bench-observational"));
  });

  auto* bi = app.add_subcommand(
      "bench-interventional",
      "effect path recovery error of the fitted model, per horizon");
  add_spec_flags(bi);
  bi->add_option("--intervention", iv_path, "intervention JSON file")->required();
  bi->callback([&] {
    spec.seed = seed;
    spec.intervention = load_iv(iv_path, dataset_dim(spec.dataset));
    auto res = run_interventional(spec);
    std::string table = "horizon,error_mean,error_sd,relative_mean\n";
    for (int h = 0; h < res.mean_error.size(); ++h) {
      const double rel = res.asymptote_valid && res.asymptote_scale > 0.0
                             ? res.mean_error[h] / res.asymptote_scale
                             : std::numeric_limits<double>::quiet_NaN();
      table += std::to_string(h + 1) + "," + format_double(res.mean_error[h]) + "," +
               format_double(res.sd_error[h]) + "," + format_double(rel) + "\n";
    }
    write_text(out_path, table);
    auto meta = spec_meta(spec, "bench-interventional");
    meta["asymptote_valid"] = res.asymptote_valid;
    meta["asymptote_scale"] = res.asymptote_scale;
    write_meta_sidecar(out_path, meta);
  });

  auto* uc = app.add_subcommand(
      "usecase-crossing",
      "per-entity first time the forecast target reaches a threshold");
  add_spec_flags(uc);
  double uc_threshold = 0.0;
  uc->add_option("--intervention", iv_path, "intervention JSON file");
  uc->add_option("--threshold", uc_threshold, "crossing level")->required();
  uc->add_option("--entities", spec.n_entities, "panel size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  uc->add_option("--history-length", spec.history_length, "observed steps per entity")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  uc->add_option("--crossing-target", spec.crossing_target, "watched component index")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  uc->callback([&] {
    spec.seed = seed;
    spec.threshold = uc_threshold;
    if (!iv_path.empty()) {
      spec.intervention = load_iv(iv_path, dataset_dim(spec.dataset));
    }
    auto rep = run_usecase_crossing(spec);
    std::string table = "entity,crossed,first_step\n";
    for (const auto& r : rep.records) {
      table += r.entity + "," + (r.crossed ? "1" : "0") + "," +
               std::to_string(r.crossed ? r.time : -1) + "\n";
    }
    write_text(out_path, table);
    auto meta = spec_meta(spec, "usecase-crossing");
    meta["threshold"] = spec.threshold;
    meta["n_entities"] = spec.n_entities;
    meta["history_length"] = spec.history_length;
    meta["crossing_target"] = spec.crossing_target;
    meta["histogram"] = rep.histogram;
    meta["never_count"] = rep.never_count;
    write_meta_sidecar(out_path, meta);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const parse_error& e) {
    std::fprintf(stderr, "causalvar: %s\n", e.what());
    return 3;
  } catch (const domain_error& e) {
    std::fprintf(stderr, "causalvar: %s\n", e.what());
    return 3;
  } catch (const numerical_error& e) {
    std::fprintf(stderr, "causalvar: %s\n", e.what());
    return 4;
  } catch (const error& e) {
    std::fprintf(stderr, "causalvar: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "causalvar: %s\n", e.what());
    return 4;
  }
  return 0;
}
