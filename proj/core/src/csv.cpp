#include "causalvar/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "causalvar/errors.hpp"

namespace causalvar {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> default_column_names(int dim) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_number(const std::string& s, long row, const std::string& column) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || s.empty()) {
    throw parse_error("row " + std::to_string(row) + ": non-numeric value '" + s +
                      "' in column " + column);
  }
  if (!std::isfinite(v)) {
    throw parse_error("row " + std::to_string(row) + ": non-finite value in column " +
                      column);
  }
  return v;
}

long parse_time(const std::string& s, long row) {
  long v = 0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || s.empty()) {
    throw parse_error("row " + std::to_string(row) + ": non-integer time index '" + s + "'");
  }
  return v;
}

struct HeaderInfo {
  std::vector<std::string> value_columns;
};

HeaderInfo read_header(std::ifstream& in, const std::string& path, bool panel,
                       const std::vector<std::string>& expected_columns) {
  std::string line;
  if (!std::getline(in, line)) {
    throw parse_error(path + ": empty file, expected a header row");
  }
  std::vector<std::string> fields = split_line(line);
  std::size_t fixed = panel ? 2 : 1;
  if (fields.size() < fixed + 1) {
    throw parse_error(path + ": header must have at least " + std::to_string(fixed + 1) +
                      " columns");
  }
  if (panel && fields[0] != "entity") {
    throw parse_error(path + ": first header column must be 'entity', got '" + fields[0] + "'");
  }
  if (fields[fixed - 1] != "t") {
    throw parse_error(path + ": expected a 't' column in the header");
  }
  HeaderInfo info;
  info.value_columns.assign(fields.begin() + static_cast<long>(fixed), fields.end());
  if (!expected_columns.empty() && info.value_columns != expected_columns) {
    throw parse_error(path + ": header value columns do not match the expected schema");
  }
  return info;
}

}  // namespace

LoadedPanel load_panel_csv(const std::string& path,
                           const std::vector<std::string>& expected_columns) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path + "'");
  HeaderInfo header = read_header(in, path, /*panel=*/true, expected_columns);
  const int d = static_cast<int>(header.value_columns.size());

  LoadedPanel out;
  out.columns = header.value_columns;

  struct Block {
    std::string id;
    long start = 0;
    std::vector<Eigen::RowVectorXd> rows;
  };
  std::vector<Block> blocks;
  std::vector<std::string> seen_ids;

  std::string line;
  long row = 1;  // header was row 1
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> fields = split_line(line);
    if (static_cast<int>(fields.size()) != d + 2) {
      throw parse_error("row " + std::to_string(row) + ": expected " +
                        std::to_string(d + 2) + " fields, got " +
                        std::to_string(fields.size()));
    }
    const std::string& entity = fields[0];
    long t = parse_time(fields[1], row);
    Eigen::RowVectorXd values(d);
    for (int j = 0; j < d; ++j) {
      values[j] = parse_number(fields[static_cast<std::size_t>(j) + 2], row,
                               header.value_columns[static_cast<std::size_t>(j)]);
    }

    if (blocks.empty() || blocks.back().id != entity) {
      for (const auto& id : seen_ids) {
        if (id == entity) {
          throw parse_error("row " + std::to_string(row) + ": rows for entity '" + entity +
                            "' are not contiguous");
        }
      }
      seen_ids.push_back(entity);
      blocks.push_back({entity, t, {}});
    } else {
      long expected = blocks.back().start + static_cast<long>(blocks.back().rows.size());
      if (t != expected) {
        throw parse_error("row " + std::to_string(row) + ": time index gap for entity '" +
                          entity + "' (expected t=" + std::to_string(expected) + ", got t=" +
                          std::to_string(t) + ")");
      }
    }
    blocks.back().rows.push_back(std::move(values));
  }

  out.panel.entities.reserve(blocks.size());
  for (auto& b : blocks) {
    TimeSeries s;
    s.start_index = b.start;
    s.values.resize(static_cast<long>(b.rows.size()), d);
    for (std::size_t r = 0; r < b.rows.size(); ++r) {
      s.values.row(static_cast<long>(r)) = b.rows[r];
    }
    out.panel.entities.push_back({std::move(b.id), std::move(s)});
  }
  return out;
}

LoadedSeries load_series_csv(const std::string& path,
                             const std::vector<std::string>& expected_columns) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path + "'");
  HeaderInfo header = read_header(in, path, /*panel=*/false, expected_columns);
  const int d = static_cast<int>(header.value_columns.size());

  LoadedSeries out;
  out.columns = header.value_columns;

  std::vector<Eigen::RowVectorXd> rows;
  bool have_start = false;
  long start = 0;

  std::string line;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> fields = split_line(line);
    if (static_cast<int>(fields.size()) != d + 1) {
      throw parse_error("row " + std::to_string(row) + ": expected " +
                        std::to_string(d + 1) + " fields, got " +
                        std::to_string(fields.size()));
    }
    long t = parse_time(fields[0], row);
    if (!have_start) {
      start = t;
      have_start = true;
    } else if (t != start + static_cast<long>(rows.size())) {
      throw parse_error("row " + std::to_string(row) + ": time index gap (expected t=" +
                        std::to_string(start + static_cast<long>(rows.size())) + ", got t=" +
                        std::to_string(t) + ")");
    }
    Eigen::RowVectorXd values(d);
    for (int j = 0; j < d; ++j) {
      values[j] = parse_number(fields[static_cast<std::size_t>(j) + 1], row,
                               header.value_columns[static_cast<std::size_t>(j)]);
    }
    rows.push_back(std::move(values));
  }

  out.series.start_index = start;
  out.series.values.resize(static_cast<long>(rows.size()), d);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.series.values.row(static_cast<long>(r)) = rows[r];
  }
  return out;
}

namespace {

void write_header(std::ostream& os, bool panel, const std::vector<std::string>& columns) {
  if (panel) os << "entity,";
  os << "t";
  for (const auto& c : columns) os << "," << c;
  os << "\n";
}

std::vector<std::string> resolve_columns(int dim, const std::vector<std::string>& columns) {
  if (columns.empty()) return default_column_names(dim);
  if (static_cast<int>(columns.size()) != dim) {
    throw domain_error("column name count does not match series dimension");
  }
  return columns;
}

}  // namespace

void save_panel_csv(const PanelSeries& panel, const std::string& path,
                    const std::vector<std::string>& columns) {
  std::ofstream os(path);
  if (!os) throw parse_error("cannot open '" + path + "' for writing");
  std::vector<std::string> cols = resolve_columns(panel.dim(), columns);
  write_header(os, /*panel=*/true, cols);
  for (const auto& e : panel.entities) {
    for (long r = 0; r < e.series.length(); ++r) {
      os << e.id << "," << (e.series.start_index + r);
      for (int j = 0; j < e.series.dim(); ++j) {
        os << "," << format_double(e.series.values(r, j));
      }
      os << "\n";
    }
  }
}

void save_series_csv(const TimeSeries& series, const std::string& path,
                     const std::vector<std::string>& columns) {
  std::ofstream os(path);
  if (!os) throw parse_error("cannot open '" + path + "' for writing");
  std::vector<std::string> cols = resolve_columns(series.dim(), columns);
  write_header(os, /*panel=*/false, cols);
  for (long r = 0; r < series.length(); ++r) {
    os << (series.start_index + r);
    for (int j = 0; j < series.dim(); ++j) {
      os << "," << format_double(series.values(r, j));
    }
    os << "\n";
  }
}

}  // namespace causalvar
