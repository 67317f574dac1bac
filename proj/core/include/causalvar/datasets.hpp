#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causalvar/model.hpp"
#include "causalvar/series.hpp"

namespace causalvar {

struct GeneratorConfig {
  double sigma = 0.1;  // structural shock scale, noise is sigma^2 I
  long burn_in = 200;
};

struct GeneratedPanel {
  PanelSeries panel;
  VarModel model;  // the reduced-form data generating process
};

// Synthetic loan scoring process over 7 variables (expertise, responsibility,
// loan amount, loan duration, income, savings, credit score): a structural
// VAR(4) where the score reacts to duration, income and savings within the
// same step and everything except the score carries 0.95 memory.
StructuralVarModel german_structural(double sigma = 0.1);
GeneratedPanel generate_german(std::uint64_t seed, long length, int n_entities,
                               const GeneratorConfig& cfg = {});
const std::vector<std::string>& german_variable_names();

// Two coupled components with a negative feedback loop: component 1 on its own
// is explosive (self weight sqrt(2)) and component 0 reins it in. Stable as a
// whole, with both companion moduli 1/sqrt(2).
StructuralVarModel pendulum_structural(double sigma = 0.1);
GeneratedPanel generate_pendulum(std::uint64_t seed, long length, int n_entities,
                                 const GeneratorConfig& cfg = {});
const std::vector<std::string>& pendulum_variable_names();

}  // namespace causalvar
