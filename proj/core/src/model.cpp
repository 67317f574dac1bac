#include "causalvar/model.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "causalvar/errors.hpp"

namespace causalvar {

namespace {

void check_square(const Eigen::MatrixXd& m, int d, const char* what) {
  if (m.rows() != d || m.cols() != d) {
    throw domain_error(std::string(what) + ": expected " + std::to_string(d) + "x" +
                       std::to_string(d) + ", got " + std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()));
  }
}

void check_noise_cov(const Eigen::MatrixXd& sigma, int d) {
  check_square(sigma, d, "noise_cov");
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw domain_error("noise_cov must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw numerical_error("noise_cov eigendecomposition failed");
  }
  if (es.eigenvalues().minCoeff() < -1e-10 * scale) {
    throw domain_error("noise_cov must be positive semidefinite");
  }
}

}  // namespace

Eigen::MatrixXd VarModel::coeff_sum() const {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim(), dim());
  for (const auto& b : coeffs) s += b;
  return s;
}

void VarModel::validate() const {
  const int d = dim();
  if (d < 1) throw domain_error("model dimension must be at least 1");
  if (lag() < 1) throw domain_error("model must have at least one lag matrix");
  for (const auto& b : coeffs) check_square(b, d, "lag coefficient");
  check_noise_cov(noise_cov, d);
}

void StructuralVarModel::validate() const {
  const int d = dim();
  if (d < 1) throw domain_error("structural model dimension must be at least 1");
  if (lag() < 1) throw domain_error("structural model must have at least one lag matrix");
  check_square(instantaneous, d, "instantaneous");
  for (int i = 0; i < d; ++i) {
    if (instantaneous(i, i) != 0.0) {
      throw domain_error("instantaneous matrix must have a zero diagonal");
    }
  }
  for (const auto& a : lag_coeffs) check_square(a, d, "lag coefficient");
  check_noise_cov(noise_cov, d);
}

namespace {

// Kahn topological check over the nonzero pattern of cause-row `inst`.
bool instantaneous_acyclic(const Eigen::MatrixXd& inst) {
  const int d = static_cast<int>(inst.rows());
  std::vector<int> indegree(d, 0);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      if (i != j && inst(i, j) != 0.0) ++indegree[j];
    }
  }
  std::queue<int> ready;
  for (int j = 0; j < d; ++j) {
    if (indegree[j] == 0) ready.push(j);
  }
  int seen = 0;
  while (!ready.empty()) {
    int i = ready.front();
    ready.pop();
    ++seen;
    for (int j = 0; j < d; ++j) {
      if (j != i && inst(i, j) != 0.0 && --indegree[j] == 0) ready.push(j);
    }
  }
  return seen == d;
}

}  // namespace

VarModel svar_to_var(const StructuralVarModel& model) {
  model.validate();
  if (!instantaneous_acyclic(model.instantaneous)) {
    throw domain_error("instantaneous effects must form an acyclic graph");
  }
  const int d = model.dim();
  Eigen::MatrixXd a0 =
      Eigen::MatrixXd::Identity(d, d) - model.instantaneous.transpose();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a0);

  VarModel out;
  out.intercept = lu.solve(model.intercept);
  out.coeffs.reserve(model.lag_coeffs.size());
  for (const auto& a : model.lag_coeffs) {
    out.coeffs.push_back(lu.solve(a.transpose()));
  }
  Eigen::MatrixXd half = lu.solve(model.noise_cov);
  out.noise_cov = lu.solve(half.transpose()).transpose();
  // Symmetrize away the solve roundoff.
  out.noise_cov = 0.5 * (out.noise_cov + out.noise_cov.transpose()).eval();
  return out;
}

bool CausalGraph::has_edge(int cause, int effect) const {
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(cause, effect));
}

Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> CausalGraph::adjacency() const {
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> adj(dim, dim);
  adj.setConstant(false);
  for (const auto& [i, j] : edges) adj(i, j) = true;
  return adj;
}

namespace {

CausalGraph graph_from_supports(int d, const std::vector<const Eigen::MatrixXd*>& mats,
                                double tol, bool include_self_loops) {
  CausalGraph g;
  g.dim = d;
  for (int cause = 0; cause < d; ++cause) {
    for (int effect = 0; effect < d; ++effect) {
      if (cause == effect && !include_self_loops) continue;
      bool present = false;
      for (const auto* m : mats) {
        // Lag matrices are effect-row aside from `instantaneous`, which the
        // structural overload transposes before passing in.
        if (std::abs((*m)(effect, cause)) > tol) {
          present = true;
          break;
        }
      }
      if (present) g.edges.emplace_back(cause, effect);
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

}  // namespace

CausalGraph induced_graph(const VarModel& model, double tol, bool include_self_loops) {
  std::vector<const Eigen::MatrixXd*> mats;
  mats.reserve(model.coeffs.size());
  for (const auto& b : model.coeffs) mats.push_back(&b);
  return graph_from_supports(model.dim(), mats, tol, include_self_loops);
}

CausalGraph induced_graph(const StructuralVarModel& model, double tol,
                          bool include_self_loops) {
  Eigen::MatrixXd inst_effect_row = model.instantaneous.transpose();
  std::vector<const Eigen::MatrixXd*> mats;
  mats.reserve(model.lag_coeffs.size() + 1);
  std::vector<Eigen::MatrixXd> transposed;
  transposed.reserve(model.lag_coeffs.size());
  for (const auto& a : model.lag_coeffs) transposed.push_back(a.transpose());
  for (const auto& b : transposed) mats.push_back(&b);
  mats.push_back(&inst_effect_row);
  return graph_from_supports(model.dim(), mats, tol, include_self_loops);
}

}  // namespace causalvar
