#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "causalvar/datasets.hpp"
#include "causalvar/errors.hpp"
#include "causalvar/estimate.hpp"
#include "causalvar/experiments.hpp"
#include "causalvar/forecast.hpp"
#include "causalvar/io_json.hpp"
#include "causalvar/metrics.hpp"
#include "causalvar/simulate.hpp"
#include "test_util.hpp"

using namespace causalvar;
using testutil::scalar_model;

namespace {

std::string temp_path(const std::string& name) {
  return std::string("/tmp/causalvar_harness_") + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return text;
}

}  // namespace

TEST_CASE("metric arithmetic on a tiny example") {
  Eigen::MatrixXd pred(2, 2), truth(2, 2);
  pred << 1.0, 2.0, 3.0, 4.0;
  truth << 0.0, 2.0, 5.0, 1.0;
  auto rep = metrics(pred, truth);
  CHECK(rep.count == 2);
  CHECK(rep.mae == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(rep.rmse == doctest::Approx(std::sqrt(3.5)).epsilon(1e-15));
  // Terms 200*1/1, 0 (0/0 counts as zero), 200*2/8, 200*3/5.
  CHECK(rep.smape == doctest::Approx(92.5).epsilon(1e-13));
  CHECK(rep.per_component_mae[0] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(rep.per_component_rmse[1] == doctest::Approx(std::sqrt(4.5)).epsilon(1e-15));
  CHECK(rep.per_component_smape[0] == doctest::Approx(125.0).epsilon(1e-13));
  CHECK(rep.per_component_smape[1] == doctest::Approx(60.0).epsilon(1e-13));
}

TEST_CASE("metric target selection") {
  Eigen::MatrixXd pred(2, 3), truth(2, 3);
  pred.setZero();
  truth.setZero();
  pred.col(1) << 1.0, -1.0;
  auto rep = metrics(pred, truth, {1});
  CHECK(rep.mae == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rep.per_component_mae.size() == 1);
  // Identical zero columns score zero everywhere, including the 0/0 terms.
  auto zeros = metrics(pred, truth, {0, 2});
  CHECK(zeros.mae == 0.0);
  CHECK(zeros.smape == 0.0);

  CHECK_THROWS_AS(metrics(pred, truth, {3}), domain_error);
  CHECK_THROWS_AS(metrics(pred, truth.leftCols(2), {}), domain_error);
}

TEST_CASE("observational benchmark runs and reproduces itself") {
  ExperimentSpec spec;
  spec.dataset = "pendulum";
  spec.seed = 5;
  spec.train_size = 150;
  spec.test_size = 60;
  spec.horizon = 2;
  spec.n_runs = 3;
  auto a = run_observational(spec);
  REQUIRE(a.fitted_runs.size() == 3);
  REQUIRE(a.oracle_runs.size() == 3);
  CHECK(a.fitted_mae.mean > 0.0);
  CHECK(a.oracle_mae.mean > 0.0);
  CHECK(std::isfinite(a.fitted_mae.sd));
  // A fit on 150 observations cannot beat the generator by much; it sits
  // within a factor of two on this scale.
  CHECK(a.fitted_mae.mean < 2.0 * a.oracle_mae.mean);

  auto b = run_observational(spec);
  for (int r = 0; r < 3; ++r) {
    CHECK(a.fitted_runs[size_t(r)].mae == b.fitted_runs[size_t(r)].mae);
    CHECK(a.oracle_runs[size_t(r)].rmse == b.oracle_runs[size_t(r)].rmse);
  }
}

TEST_CASE("one step oracle error is the noise scale") {
  // At horizon 1 the generator's forecast error is the structural shock, so
  // the oracle RMSE estimates sigma = 0.1.
  ExperimentSpec spec;
  spec.dataset = "pendulum";
  spec.seed = 11;
  spec.train_size = 200;
  spec.test_size = 500;
  spec.horizon = 1;
  spec.n_runs = 3;
  auto res = run_observational(spec);
  CHECK(res.oracle_rmse.mean == doctest::Approx(0.1).epsilon(0.1));
  CHECK(res.fitted_rmse.mean == doctest::Approx(0.1).epsilon(0.15));
}

TEST_CASE("observational benchmark validates its inputs") {
  ExperimentSpec spec;
  spec.dataset = "unknown";
  CHECK_THROWS_AS(run_observational(spec), domain_error);
  spec.dataset = "german";
  spec.horizon = 0;
  CHECK_THROWS_AS(run_observational(spec), domain_error);
  spec.horizon = 1;
  spec.n_runs = 0;
  CHECK_THROWS_AS(run_observational(spec), domain_error);
  spec.n_runs = 1;
  spec.targets = {9};
  CHECK_THROWS_AS(run_observational(spec), domain_error);
}

TEST_CASE("interventional benchmark on the credit model") {
  ExperimentSpec spec;
  spec.dataset = "german";
  spec.seed = 3;
  spec.train_size = 400;
  spec.horizon = 5;
  spec.n_runs = 3;
  spec.targets = {6};
  Intervention iv;
  iv.kind = InterventionKind::additive;
  iv.force = Eigen::VectorXd::Zero(7);
  iv.force[0] = 0.2;
  spec.intervention = iv;

  auto res = run_interventional(spec);
  REQUIRE(res.per_run_error.rows() == 3);
  REQUIRE(res.per_run_error.cols() == 5);
  // The first intervened step is the shift itself for every linear model, so
  // fitted and true effects coincide exactly there.
  CHECK(res.mean_error[0] == 0.0);
  for (int h = 1; h < 5; ++h) {
    CHECK(std::isfinite(res.mean_error[h]));
    CHECK(res.mean_error[h] >= 0.0);
  }
  REQUIRE(res.asymptote_valid);
  CHECK(res.asymptote_scale == doctest::Approx(478.4).epsilon(1e-9));

  auto again = run_interventional(spec);
  CHECK((res.per_run_error - again.per_run_error).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("interventional benchmark requires an intervention") {
  ExperimentSpec spec;
  spec.dataset = "german";
  CHECK_THROWS_AS(run_interventional(spec), domain_error);
}

TEST_CASE("threshold crossing scenario") {
  ExperimentSpec spec;
  spec.dataset = "german";
  spec.seed = 8;
  spec.n_entities = 12;
  spec.history_length = 50;
  spec.horizon = 6;
  spec.crossing_target = 6;

  SUBCASE("everyone already above a bottomless threshold") {
    spec.threshold = -1e9;
    auto rep = run_usecase_crossing(spec);
    REQUIRE(rep.records.size() == 12);
    CHECK(rep.histogram[0] == 12);
    CHECK(rep.never_count == 0);
  }
  SUBCASE("nobody reaches an unreachable threshold") {
    spec.threshold = 1e9;
    auto rep = run_usecase_crossing(spec);
    CHECK(rep.never_count == 12);
    long crossed = 0;
    for (long c : rep.histogram) crossed += c;
    CHECK(crossed == 0);
  }
  SUBCASE("a strong shift makes everyone cross at the first step") {
    // Pendulum values stay within a couple of noise scales of zero, so a
    // threshold of five is unreachable without help and a +10 shift clears
    // it at the first intervened step for every entity.
    spec.dataset = "pendulum";
    spec.crossing_target = 0;
    spec.threshold = 5.0;
    auto plain = run_usecase_crossing(spec);
    CHECK(plain.never_count == 12);

    Intervention iv;
    iv.kind = InterventionKind::additive;
    iv.force = Eigen::Vector2d(10.0, 0.0);
    spec.intervention = iv;
    auto boosted = run_usecase_crossing(spec);
    CHECK(boosted.histogram[1] == 12);
    CHECK(boosted.never_count == 0);
  }
  SUBCASE("bookkeeping adds up at a moderate threshold") {
    spec.threshold = 0.05;
    auto rep = run_usecase_crossing(spec);
    long crossed = 0;
    for (long c : rep.histogram) crossed += c;
    CHECK(crossed + rep.never_count == 12);
    for (const auto& r : rep.records) {
      if (r.crossed) {
        CHECK(r.time >= 0);
        CHECK(r.time <= 6);
      }
    }
  }
}

TEST_CASE("crossing scenario validation") {
  ExperimentSpec spec;
  spec.dataset = "german";
  spec.crossing_target = 7;
  CHECK_THROWS_AS(run_usecase_crossing(spec), domain_error);
  spec.crossing_target = 0;
  spec.history_length = 2;  // below the generator lag
  CHECK_THROWS_AS(run_usecase_crossing(spec), domain_error);
}

TEST_CASE("process model json round trip") {
  SplitMix64 seeder(3);
  auto m = testutil::random_stable_model(seeder, 3, 2, 0.6);
  const std::string path = temp_path("model.json");
  save_model_json(m, path);
  auto back = load_model_json(path);
  CHECK(back.dim() == 3);
  CHECK(back.lag() == 2);
  CHECK((back.intercept - m.intercept).cwiseAbs().maxCoeff() == 0.0);
  for (int k = 0; k < 2; ++k) {
    CHECK((back.coeffs[size_t(k)] - m.coeffs[size_t(k)]).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK((back.noise_cov - m.noise_cov).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("process model json rejects malformed input") {
  SUBCASE("missing orientation") {
    CHECK_THROWS_AS(model_from_json("{\"dim\":1,\"lag\":1}"), parse_error);
  }
  SUBCASE("wrong orientation") {
    CHECK_THROWS_AS(
        model_from_json("{\"orientation\":\"cause-row\",\"dim\":1,\"lag\":1}"),
        parse_error);
  }
  SUBCASE("coefficient count mismatch") {
    std::string text = R"({"orientation":"effect-row","dim":1,"lag":2,
      "intercept":[0],"coeffs":[[[0.5]]],"noise_cov":[[1]]})";
    CHECK_THROWS_AS(model_from_json(text), parse_error);
  }
  SUBCASE("non numeric entry") {
    std::string text = R"({"orientation":"effect-row","dim":1,"lag":1,
      "intercept":[0],"coeffs":[[["x"]]],"noise_cov":[[1]]})";
    CHECK_THROWS_AS(model_from_json(text), parse_error);
  }
  SUBCASE("asymmetric noise fails validation at parse time") {
    std::string text = R"({"orientation":"effect-row","dim":2,"lag":1,
      "intercept":[0,0],"coeffs":[[[0.1,0],[0,0.1]]],
      "noise_cov":[[1,0.5],[0,1]]})";
    CHECK_THROWS_AS(model_from_json(text), parse_error);
  }
  SUBCASE("invalid json") {
    CHECK_THROWS_AS(model_from_json("{nope"), parse_error);
  }
}

TEST_CASE("intervention json round trip and defaults") {
  const std::string path = temp_path("iv.json");

  Intervention iv;
  iv.kind = InterventionKind::assignment;
  iv.force = Eigen::Vector2d(1.0, 0.0);
  iv.target = Eigen::Vector2d(3.5, 0.0);
  iv.start = 4;
  save_intervention_json(iv, path);
  auto back = load_intervention_json(path, 2);
  CHECK(back.kind == InterventionKind::assignment);
  CHECK(back.force[0] == 1.0);
  CHECK(back.target[0] == 3.5);
  CHECK(back.start == 4);

  {
    std::ofstream os(path);
    os << R"({"kind":"additive","force":[1.0,2.0]})";
  }
  auto add = load_intervention_json(path, 2);
  CHECK(add.kind == InterventionKind::additive);
  CHECK(add.target.cwiseAbs().maxCoeff() == 0.0);
  CHECK(add.start == 0);

  {
    std::ofstream os(path);
    os << R"({"kind":"forcing","force":[1.0,0.0]})";
  }
  CHECK_THROWS_AS(load_intervention_json(path, 2), parse_error);

  {
    std::ofstream os(path);
    os << R"({"kind":"do","force":[1.0,0.0],"target":[1.0,0.0],"start":-1})";
  }
  CHECK_THROWS_AS(load_intervention_json(path, 2), parse_error);

  {
    std::ofstream os(path);
    os << R"({"kind":"nudge","force":[1.0,0.0]})";
  }
  CHECK_THROWS_AS(load_intervention_json(path, 2), parse_error);

  {
    std::ofstream os(path);
    os << R"({"kind":"additive","force":[1.0]})";  // wrong length
  }
  CHECK_THROWS_AS(load_intervention_json(path, 2), parse_error);
  std::remove(path.c_str());
}

TEST_CASE("equilibrium model json round trip") {
  LinearScm scm;
  scm.coeff.resize(2, 2);
  scm.coeff << 0.5, 0.0, 0.3, 0.4;
  scm.exo_cov = Eigen::Vector2d(1.0, 2.0).asDiagonal();
  scm.mean = Eigen::Vector2d(2.0, 3.0);
  const std::string path = temp_path("scm.json");
  save_scm_json(scm, path);
  auto back = load_scm_json(path);
  CHECK((back.coeff - scm.coeff).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.exo_cov - scm.exo_cov).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.mean - scm.mean).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("fit sidecar carries the information criteria") {
  auto gen = generate_pendulum(4, 100, 1);
  auto rep = fit(gen.panel.entities[0].series, FitOptions{});
  const std::string path = temp_path("fit.json");
  save_fit_sidecar_json(rep, path);
  auto j = nlohmann::json::parse(slurp(path));
  CHECK(j["aic"].get<double>() == rep.aic);
  CHECK(j["bic"].get<double>() == rep.bic);
  CHECK(j["n_effective"].get<long>() == rep.n_effective);
  std::remove(path.c_str());
}

TEST_CASE("forecast table and sidecar") {
  auto m = scalar_model(0.5, 0.0, 1.0);
  TimeSeries h;
  h.values.resize(1, 1);
  h.values << 4.0;
  auto fc = forecast(m, h, 3);

  const std::string csv_path = temp_path("forecast.csv");
  save_forecast_csv(fc, csv_path);
  std::string text = slurp(csv_path);
  CHECK(text.find("k,mean_0,var_0\n") == 0);
  CHECK(text.find("\n1,2,1\n") != std::string::npos);
  CHECK(text.find("\n2,1,1.25\n") != std::string::npos);
  CHECK(text.find("\n3,0.5,1.3125\n") != std::string::npos);

  const std::string json_path = temp_path("forecast.json");
  save_forecast_json(fc, json_path);
  auto j = nlohmann::json::parse(slurp(json_path));
  CHECK(j["horizon"].get<int>() == 3);
  CHECK(j["unstable_dynamics"].get<bool>() == false);
  CHECK(j["means"].size() == 3);
  CHECK(j["covariances"].size() == 3);
  CHECK(j["means"][0][0].get<double>() == 2.0);
  std::remove(csv_path.c_str());
  std::remove(json_path.c_str());
}
