#include "causalvar/intervention.hpp"

#include <string>

#include "causalvar/errors.hpp"

namespace causalvar {

namespace {

void check_vector(const Eigen::VectorXd& v, int d, const char* what) {
  if (v.size() != d) {
    throw domain_error(std::string(what) + ": expected length " + std::to_string(d) +
                       ", got " + std::to_string(v.size()));
  }
}

}  // namespace

VarModel apply_additive(const VarModel& model, const Eigen::VectorXd& force) {
  model.validate();
  check_vector(force, model.dim(), "additive force");
  VarModel out = model;
  out.intercept += force;
  return out;
}

VarModel apply_forcing(const VarModel& model, const Eigen::VectorXd& force,
                       const Eigen::VectorXd& target) {
  model.validate();
  const int d = model.dim();
  check_vector(force, d, "forcing force");
  check_vector(target, d, "forcing target");
  if ((force.array() < 0.0).any()) {
    throw domain_error("forcing strengths must be nonnegative");
  }
  // Row scaling by 1/(1+F_i); exact identity for F_i = 0.
  Eigen::ArrayXd scale = 1.0 / (1.0 + force.array());
  VarModel out;
  out.intercept = (model.intercept + force.cwiseProduct(target)).cwiseProduct(scale.matrix());
  out.coeffs.reserve(model.coeffs.size());
  for (const auto& b : model.coeffs) {
    out.coeffs.push_back(scale.matrix().asDiagonal() * b);
  }
  out.noise_cov = scale.matrix().asDiagonal() * model.noise_cov * scale.matrix().asDiagonal();
  return out;
}

VarModel do_intervention(const VarModel& model, int component, double value) {
  model.validate();
  const int d = model.dim();
  if (component < 0 || component >= d) {
    throw domain_error("do_intervention: component " + std::to_string(component) +
                       " out of range for dimension " + std::to_string(d));
  }
  VarModel out = model;
  for (auto& b : out.coeffs) b.row(component).setZero();
  out.intercept[component] = value;
  out.noise_cov.row(component).setZero();
  out.noise_cov.col(component).setZero();
  return out;
}

void validate_intervention(const VarModel& model, const Intervention& iv) {
  const int d = model.dim();
  check_vector(iv.force, d, "intervention force");
  switch (iv.kind) {
    case InterventionKind::additive:
      break;
    case InterventionKind::forcing:
      check_vector(iv.target, d, "intervention target");
      if ((iv.force.array() < 0.0).any()) {
        throw domain_error("forcing strengths must be nonnegative");
      }
      break;
    case InterventionKind::assignment:
      check_vector(iv.target, d, "intervention target");
      break;
  }
  if (iv.start < 0) {
    throw domain_error("intervention start must be >= 0");
  }
}

VarModel intervened_model(const VarModel& model, const Intervention& iv) {
  validate_intervention(model, iv);
  switch (iv.kind) {
    case InterventionKind::additive:
      return apply_additive(model, iv.force);
    case InterventionKind::forcing:
      return apply_forcing(model, iv.force, iv.target);
    case InterventionKind::assignment: {
      VarModel out = model;
      for (int i = 0; i < model.dim(); ++i) {
        if (iv.force[i] != 0.0) out = do_intervention(out, i, iv.target[i]);
      }
      return out;
    }
  }
  throw domain_error("unknown intervention kind");
}

Eigen::MatrixXd noise_transform(const VarModel& model, const Intervention& iv) {
  validate_intervention(model, iv);
  const int d = model.dim();
  switch (iv.kind) {
    case InterventionKind::additive:
      return Eigen::MatrixXd::Identity(d, d);
    case InterventionKind::forcing: {
      Eigen::VectorXd scale = (1.0 / (1.0 + iv.force.array())).matrix();
      return Eigen::MatrixXd(scale.asDiagonal());
    }
    case InterventionKind::assignment: {
      Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d);
      for (int i = 0; i < d; ++i) {
        if (iv.force[i] != 0.0) m(i, i) = 0.0;
      }
      return m;
    }
  }
  throw domain_error("unknown intervention kind");
}

ForcingStabilityReport forcing_stability(const VarModel& model,
                                         const Eigen::VectorXd& force,
                                         double margin) {
  ForcingStabilityReport out;
  StabilityReport base = check_stability(model, margin);
  Eigen::VectorXd target = Eigen::VectorXd::Zero(model.dim());
  out.report = check_stability(apply_forcing(model, force, target), margin);
  out.preserved = base.stable && out.report.stable;
  return out;
}

}  // namespace causalvar
