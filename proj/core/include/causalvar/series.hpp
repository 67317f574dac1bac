#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace causalvar {

// A single multivariate trajectory. Row r holds the observation at time
// start_index + r; columns are components.
struct TimeSeries {
  Eigen::MatrixXd values;  // length x dim
  long start_index = 0;

  long length() const { return values.rows(); }
  int dim() const { return static_cast<int>(values.cols()); }
  // Row for absolute time t, caller guarantees coverage.
  Eigen::RowVectorXd at_time(long t) const { return values.row(t - start_index); }
  bool covers(long t) const { return t >= start_index && t < start_index + length(); }
};

// Several trajectories over the same variables (one per entity).
struct PanelSeries {
  struct Entity {
    std::string id;
    TimeSeries series;
  };
  std::vector<Entity> entities;

  int dim() const { return entities.empty() ? 0 : entities.front().series.dim(); }
  std::size_t size() const { return entities.size(); }
};

}  // namespace causalvar
