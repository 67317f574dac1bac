#pragma once

#include <string>
#include <vector>

#include "causalvar/series.hpp"

namespace causalvar {

struct LoadedPanel {
  PanelSeries panel;
  std::vector<std::string> columns;  // value column names from the header
};

struct LoadedSeries {
  TimeSeries series;
  std::vector<std::string> columns;
};

// Wide panel format: header "entity,t,<name>..." and one row per observation.
// Rows must be grouped by entity with a consecutive time index inside each
// group. When expected_columns is nonempty the header has to match it.
// Malformed input raises parse_error naming the offending row.
LoadedPanel load_panel_csv(const std::string& path,
                           const std::vector<std::string>& expected_columns = {});

// Single trajectory format: header "t,<name>...".
LoadedSeries load_series_csv(const std::string& path,
                             const std::vector<std::string>& expected_columns = {});

// Writers emit 17 significant digits so numbers survive a round trip exactly;
// loading a saved file and saving again reproduces the bytes.
void save_panel_csv(const PanelSeries& panel, const std::string& path,
                    const std::vector<std::string>& columns = {});
void save_series_csv(const TimeSeries& series, const std::string& path,
                     const std::vector<std::string>& columns = {});

// "x0", "x1", ... fallback used whenever no explicit names are given.
std::vector<std::string> default_column_names(int dim);

// Shared numeric formatting for all text output (%.17g).
std::string format_double(double v);

}  // namespace causalvar
