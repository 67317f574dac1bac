#include "causalvar/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "causalvar/errors.hpp"

namespace causalvar {

namespace {

struct StackedSample {
  Eigen::MatrixXd design;   // n x (d*p [+1 intercept last])
  Eigen::MatrixXd targets;  // n x d
};

// Rows [x_{t-1}, ..., x_{t-p}, 1] for every usable t, entities concatenated.
StackedSample stack_sample(const PanelSeries& data, int p, bool intercept) {
  const int d = data.dim();
  long n = 0;
  for (const auto& e : data.entities) {
    n += std::max<long>(0, e.series.length() - p);
  }
  const int k = d * p + (intercept ? 1 : 0);
  StackedSample s;
  s.design.resize(n, k);
  s.targets.resize(n, d);
  long r = 0;
  for (const auto& e : data.entities) {
    const Eigen::MatrixXd& x = e.series.values;
    for (long t = p; t < x.rows(); ++t, ++r) {
      for (int j = 1; j <= p; ++j) {
        s.design.block(r, (j - 1) * d, 1, d) = x.row(t - j);
      }
      if (intercept) s.design(r, d * p) = 1.0;
      s.targets.row(r) = x.row(t);
    }
  }
  return s;
}

double log_det_psd(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw numerical_error("fit: residual covariance eigendecomposition failed");
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    acc += std::log(std::max(es.eigenvalues()[i], 1e-300));
  }
  return acc;
}

}  // namespace

FitReport fit(const PanelSeries& data, const FitOptions& opts) {
  const int d = data.dim();
  if (d < 1) throw domain_error("fit: empty panel");
  const int p = opts.lag;
  if (p < 1) throw domain_error("fit: lag must be >= 1");
  if (opts.ridge < 0.0) throw domain_error("fit: ridge must be >= 0");
  if (opts.graph) {
    if (opts.graph->dim != d) {
      throw domain_error("fit: constraint graph dimension does not match the data");
    }
  }

  StackedSample s = stack_sample(data, p, opts.include_intercept);
  const long n = s.design.rows();
  const int k_full = static_cast<int>(s.design.cols());

  // Per-equation regressor subsets under the optional graph constraint.
  std::vector<std::vector<int>> cols(static_cast<std::size_t>(d));
  int k_max = 0;
  for (int j = 0; j < d; ++j) {
    auto& cj = cols[static_cast<std::size_t>(j)];
    for (int lagk = 0; lagk < p; ++lagk) {
      for (int i = 0; i < d; ++i) {
        if (!opts.graph || i == j || opts.graph->has_edge(i, j)) {
          cj.push_back(lagk * d + i);
        }
      }
    }
    if (opts.include_intercept) cj.push_back(d * p);
    k_max = std::max(k_max, static_cast<int>(cj.size()));
  }
  if (n < k_max) {
    throw domain_error("fit: " + std::to_string(n) + " usable rows but " +
                       std::to_string(k_max) + " regressors; need at least " +
                       std::to_string(k_max) + " rows (series length >= lag + regressors)");
  }

  FitReport report;
  report.n_effective = n;
  report.model.intercept = Eigen::VectorXd::Zero(d);
  report.model.coeffs.assign(static_cast<std::size_t>(p), Eigen::MatrixXd::Zero(d, d));

  long n_params = 0;
  for (int j = 0; j < d; ++j) {
    const auto& cj = cols[static_cast<std::size_t>(j)];
    const int kj = static_cast<int>(cj.size());
    n_params += kj;

    // Ridge rows sit under the data rows; the intercept column stays unpenalized.
    const double lam = std::sqrt(opts.ridge);
    long extra = opts.ridge > 0.0 ? kj : 0;
    Eigen::MatrixXd z(n + extra, kj);
    for (int c = 0; c < kj; ++c) {
      z.col(c).head(n) = s.design.col(cj[static_cast<std::size_t>(c)]);
    }
    if (extra > 0) {
      z.bottomRows(extra).setZero();
      for (int c = 0; c < kj; ++c) {
        bool is_intercept = opts.include_intercept && cj[static_cast<std::size_t>(c)] == d * p;
        z(n + c, c) = is_intercept ? 0.0 : lam;
      }
    }
    Eigen::VectorXd y(n + extra);
    y.head(n) = s.targets.col(j);
    if (extra > 0) y.tail(extra).setZero();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues().maxCoeff();
    const double smin = svd.singularValues().minCoeff();
    if (smin <= 0.0 || smax / smin > 1e12) {
      throw domain_error("fit: design for equation " + std::to_string(j) +
                         " is rank deficient or ill-conditioned (condition > 1e12); "
                         "consider a ridge penalty");
    }
    Eigen::VectorXd beta = svd.solve(y);

    for (int c = 0; c < kj; ++c) {
      int col = cj[static_cast<std::size_t>(c)];
      if (opts.include_intercept && col == d * p) {
        report.model.intercept[j] = beta[c];
      } else {
        report.model.coeffs[static_cast<std::size_t>(col / d)](j, col % d) = beta[c];
      }
    }
  }

  Eigen::MatrixXd resid = s.targets - s.design * [&] {
    Eigen::MatrixXd coef(k_full, d);
    for (int j = 0; j < d; ++j) {
      for (int lagk = 0; lagk < p; ++lagk) {
        coef.block(lagk * d, j, d, 1) =
            report.model.coeffs[static_cast<std::size_t>(lagk)].row(j).transpose();
      }
      if (opts.include_intercept) coef(d * p, j) = report.model.intercept[j];
    }
    return coef;
  }();

  // Small-sample correction with the unconstrained regressor count.
  const long dof = std::max<long>(n - (d * p + (opts.include_intercept ? 1 : 0)), 1);
  report.model.noise_cov = (resid.transpose() * resid) / static_cast<double>(dof);
  report.model.noise_cov =
      0.5 * (report.model.noise_cov + report.model.noise_cov.transpose()).eval();

  Eigen::MatrixXd sigma_ml = (resid.transpose() * resid) / static_cast<double>(n);
  const double ll_term = static_cast<double>(n) * log_det_psd(sigma_ml);
  report.aic = ll_term + 2.0 * static_cast<double>(n_params);
  report.bic = ll_term + std::log(static_cast<double>(n)) * static_cast<double>(n_params);

  report.residuals = residuals(report.model, data);
  return report;
}

FitReport fit(const TimeSeries& data, const FitOptions& opts) {
  PanelSeries panel;
  panel.entities.push_back({"", data});
  FitReport report = fit(panel, opts);
  // Single series keeps its time labels on the residual rows.
  report.residuals.start_index = data.start_index + opts.lag;
  return report;
}

TimeSeries residuals(const VarModel& model, const TimeSeries& data) {
  model.validate();
  const int p = model.lag();
  if (data.dim() != model.dim()) {
    throw domain_error("residuals: series dimension does not match the model");
  }
  if (data.length() < p + 1) {
    throw domain_error("residuals: need at least lag+1 observations");
  }
  TimeSeries out;
  out.start_index = data.start_index + p;
  out.values.resize(data.length() - p, data.dim());
  for (long t = p; t < data.length(); ++t) {
    Eigen::VectorXd pred = model.intercept;
    for (int k = 1; k <= p; ++k) {
      pred.noalias() +=
          model.coeffs[static_cast<std::size_t>(k - 1)] * data.values.row(t - k).transpose();
    }
    out.values.row(t - p) = data.values.row(t) - pred.transpose();
  }
  return out;
}

TimeSeries residuals(const VarModel& model, const PanelSeries& data) {
  TimeSeries out;
  out.start_index = 0;
  const int p = model.lag();
  long n = 0;
  for (const auto& e : data.entities) n += std::max<long>(0, e.series.length() - p);
  out.values.resize(n, model.dim());
  long r = 0;
  for (const auto& e : data.entities) {
    if (e.series.length() < p + 1) continue;
    TimeSeries res = residuals(model, e.series);
    out.values.block(r, 0, res.length(), res.dim()) = res.values;
    r += res.length();
  }
  return out;
}

namespace {

PanelSeries trim_front(const PanelSeries& data, long drop) {
  PanelSeries out;
  out.entities.reserve(data.entities.size());
  for (const auto& e : data.entities) {
    TimeSeries s;
    long keep = std::max<long>(0, e.series.length() - drop);
    s.start_index = e.series.start_index + (e.series.length() - keep);
    s.values = e.series.values.bottomRows(keep);
    out.entities.push_back({e.id, std::move(s)});
  }
  return out;
}

}  // namespace

int select_lag(const PanelSeries& data, int max_lag, InfoCriterion criterion,
               const FitOptions& base) {
  if (max_lag < 1) throw domain_error("select_lag: max_lag must be >= 1");
  int best_p = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= max_lag; ++p) {
    FitOptions opts = base;
    opts.lag = p;
    // Same prediction targets for every candidate: drop the head so targets
    // start max_lag observations in.
    FitReport rep = fit(trim_front(data, max_lag - p), opts);
    double score = criterion == InfoCriterion::aic ? rep.aic : rep.bic;
    if (score < best) {
      best = score;
      best_p = p;
    }
  }
  return best_p;
}

int select_lag(const TimeSeries& data, int max_lag, InfoCriterion criterion,
               const FitOptions& base) {
  PanelSeries panel;
  panel.entities.push_back({"", data});
  return select_lag(panel, max_lag, criterion, base);
}

}  // namespace causalvar
