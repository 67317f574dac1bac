#include "causalvar/io_json.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "causalvar/csv.hpp"
#include "causalvar/errors.hpp"

namespace causalvar {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw parse_error(path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw parse_error("cannot open '" + path + "' for writing");
  os << text;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::MatrixXd matrix_from_json(const json& j, int rows, int cols,
                                 const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    throw parse_error(what + ": expected " + std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw parse_error(what + ": row " + std::to_string(r) + " must have " +
                        std::to_string(cols) + " entries");
    }
    for (int c = 0; c < cols; ++c) {
      const json& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_number()) {
        throw parse_error(what + ": non-numeric entry at (" + std::to_string(r) + "," +
                          std::to_string(c) + ")");
      }
      m(r, c) = cell.get<double>();
    }
  }
  return m;
}

Eigen::VectorXd vector_from_json(const json& j, int n, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw parse_error(what + ": expected " + std::to_string(n) + " entries");
  }
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    const json& cell = j[static_cast<std::size_t>(i)];
    if (!cell.is_number()) {
      throw parse_error(what + ": non-numeric entry at " + std::to_string(i));
    }
    v[i] = cell.get<double>();
  }
  return v;
}

void require_effect_row(const json& j, const std::string& context) {
  if (!j.contains("orientation") || !j["orientation"].is_string() ||
      j["orientation"].get<std::string>() != "effect-row") {
    throw parse_error(context +
                      ": missing or unsupported orientation (expected \"effect-row\")");
  }
}

int read_dim(const json& j, const std::string& context) {
  if (!j.contains("dim") || !j["dim"].is_number_integer()) {
    throw parse_error(context + ": missing integer field 'dim'");
  }
  int d = j["dim"].get<int>();
  if (d < 1) throw parse_error(context + ": dim must be >= 1");
  return d;
}

}  // namespace

std::string model_to_json(const VarModel& model) {
  json j;
  j["dim"] = model.dim();
  j["lag"] = model.lag();
  j["orientation"] = "effect-row";
  j["intercept"] = vector_to_json(model.intercept);
  json coeffs = json::array();
  for (const auto& b : model.coeffs) coeffs.push_back(matrix_to_json(b));
  j["coeffs"] = std::move(coeffs);
  j["noise_cov"] = matrix_to_json(model.noise_cov);
  return j.dump(2) + "\n";
}

VarModel model_from_json(const std::string& text, const std::string& context) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw parse_error(context + ": " + e.what());
  }
  require_effect_row(j, context);
  int d = read_dim(j, context);
  if (!j.contains("lag") || !j["lag"].is_number_integer()) {
    throw parse_error(context + ": missing integer field 'lag'");
  }
  int p = j["lag"].get<int>();
  if (p < 1) throw parse_error(context + ": lag must be >= 1");

  VarModel m;
  m.intercept = vector_from_json(j.at("intercept"), d, context + ".intercept");
  if (!j.contains("coeffs") || !j["coeffs"].is_array() ||
      static_cast<int>(j["coeffs"].size()) != p) {
    throw parse_error(context + ": 'coeffs' must hold lag matrices");
  }
  for (int k = 0; k < p; ++k) {
    m.coeffs.push_back(matrix_from_json(j["coeffs"][static_cast<std::size_t>(k)], d, d,
                                        context + ".coeffs[" + std::to_string(k) + "]"));
  }
  m.noise_cov = matrix_from_json(j.at("noise_cov"), d, d, context + ".noise_cov");
  try {
    m.validate();
  } catch (const error& e) {
    throw parse_error(context + ": " + e.what());
  }
  return m;
}

VarModel load_model_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str(), path);
}

void save_model_json(const VarModel& model, const std::string& path) {
  model.validate();
  write_text_file(path, model_to_json(model));
}

Intervention load_intervention_json(const std::string& path, int dim) {
  json j = read_json_file(path);
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw parse_error(path + ": missing string field 'kind'");
  }
  std::string kind = j["kind"].get<std::string>();
  Intervention iv;
  if (kind == "additive") {
    iv.kind = InterventionKind::additive;
  } else if (kind == "forcing") {
    iv.kind = InterventionKind::forcing;
  } else if (kind == "do") {
    iv.kind = InterventionKind::assignment;
  } else {
    throw parse_error(path + ": unknown intervention kind '" + kind + "'");
  }
  iv.force = vector_from_json(j.at("force"), dim, path + ".force");
  if (j.contains("target")) {
    iv.target = vector_from_json(j["target"], dim, path + ".target");
  } else {
    if (iv.kind != InterventionKind::additive) {
      throw parse_error(path + ": 'target' is required for kind '" + kind + "'");
    }
    iv.target = Eigen::VectorXd::Zero(dim);
  }
  if (j.contains("start")) {
    if (!j["start"].is_number_integer()) {
      throw parse_error(path + ": 'start' must be an integer");
    }
    iv.start = j["start"].get<long>();
    if (iv.start < 0) throw parse_error(path + ": 'start' must be >= 0");
  }
  return iv;
}

void save_intervention_json(const Intervention& iv, const std::string& path) {
  json j;
  switch (iv.kind) {
    case InterventionKind::additive:
      j["kind"] = "additive";
      break;
    case InterventionKind::forcing:
      j["kind"] = "forcing";
      break;
    case InterventionKind::assignment:
      j["kind"] = "do";
      break;
  }
  j["force"] = vector_to_json(iv.force);
  if (iv.target.size() > 0) j["target"] = vector_to_json(iv.target);
  j["start"] = iv.start;
  write_text_file(path, j.dump(2) + "\n");
}

LinearScm load_scm_json(const std::string& path) {
  json j = read_json_file(path);
  require_effect_row(j, path);
  int d = read_dim(j, path);
  LinearScm scm;
  scm.coeff = matrix_from_json(j.at("coeff"), d, d, path + ".coeff");
  scm.exo_cov = matrix_from_json(j.at("exo_cov"), d, d, path + ".exo_cov");
  scm.mean = vector_from_json(j.at("mean"), d, path + ".mean");
  try {
    scm.validate();
  } catch (const error& e) {
    throw parse_error(path + ": " + e.what());
  }
  return scm;
}

void save_scm_json(const LinearScm& scm, const std::string& path) {
  scm.validate();
  json j;
  j["dim"] = scm.dim();
  j["orientation"] = "effect-row";
  j["coeff"] = matrix_to_json(scm.coeff);
  j["exo_cov"] = matrix_to_json(scm.exo_cov);
  j["mean"] = vector_to_json(scm.mean);
  write_text_file(path, j.dump(2) + "\n");
}

void save_fit_sidecar_json(const FitReport& report, const std::string& path) {
  json j;
  j["aic"] = report.aic;
  j["bic"] = report.bic;
  j["n_effective"] = report.n_effective;
  write_text_file(path, j.dump(2) + "\n");
}

void save_forecast_csv(const Forecast& fc, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw parse_error("cannot open '" + path + "' for writing");
  const int d = static_cast<int>(fc.means.cols());
  os << "k";
  for (int j = 0; j < d; ++j) os << ",mean_" << j;
  for (int j = 0; j < d; ++j) os << ",var_" << j;
  os << "\n";
  for (long k = 0; k < fc.means.rows(); ++k) {
    os << (k + 1);
    for (int j = 0; j < d; ++j) os << "," << format_double(fc.means(k, j));
    for (int j = 0; j < d; ++j) {
      os << "," << format_double(fc.covariances[static_cast<std::size_t>(k)](j, j));
    }
    os << "\n";
  }
}

void save_forecast_json(const Forecast& fc, const std::string& path) {
  json j;
  j["horizon"] = fc.means.rows();
  j["unstable_dynamics"] = fc.unstable_dynamics;
  j["means"] = matrix_to_json(fc.means);
  json covs = json::array();
  for (const auto& c : fc.covariances) covs.push_back(matrix_to_json(c));
  j["covariances"] = std::move(covs);
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace causalvar
