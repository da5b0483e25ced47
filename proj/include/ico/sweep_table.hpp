#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ico/errors.hpp"

namespace ico {

inline constexpr const char* tool_version = "1.0.0";

// Shortest decimal rendering that still round-trips a double exactly
// (17 significant digits); NaN becomes the literal token "nan".
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct SweepAxis {
  std::string name;
  std::vector<double> grid;  // strictly increasing
};

enum class SweepFormat { csv, json };

// Dense table of values over the outer product of one or two axes, stored
// row-major (last axis fastest), plus an ordered metadata block. Excluded
// cells carry NaN in their value columns and 1 in a companion flag column.
class SweepTable {
 public:
  SweepTable(std::vector<SweepAxis> axes, std::vector<std::string> value_columns,
             std::vector<std::pair<std::string, std::string>> metadata)
      : axes_(std::move(axes)), columns_(std::move(value_columns)), metadata_(std::move(metadata)) {
    if (axes_.empty() || columns_.empty()) throw InvalidParameter("sweep table needs axes and columns");
    rows_ = 1;
    for (const SweepAxis& ax : axes_) {
      if (ax.grid.empty()) throw InvalidParameter("sweep axis '" + ax.name + "' is empty");
      for (std::size_t i = 1; i < ax.grid.size(); ++i)
        if (!(ax.grid[i] > ax.grid[i - 1]))
          throw InvalidParameter("sweep axis '" + ax.name + "' is not strictly increasing");
      rows_ *= ax.grid.size();
    }
    values_.assign(rows_ * columns_.size(), std::nan(""));
  }

  std::size_t rows() const { return rows_; }
  const std::vector<SweepAxis>& axes() const { return axes_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const { return metadata_; }

  double& value(std::size_t row, std::size_t col) { return values_[row * columns_.size() + col]; }
  double value(std::size_t row, std::size_t col) const {
    return values_[row * columns_.size() + col];
  }

  // Row-major row index of a grid point; i is the outer-axis index.
  std::size_t row_index(std::size_t i, std::size_t j = 0) const {
    return axes_.size() == 1 ? i : i * axes_[1].grid.size() + j;
  }

  // One axis coordinate of a row.
  double axis_value(std::size_t row, std::size_t axis) const {
    if (axes_.size() == 1) return axes_[0].grid[row];
    const std::size_t inner = axes_[1].grid.size();
    return axis == 0 ? axes_[0].grid[row / inner] : axes_[1].grid[row % inner];
  }

  // '#'-prefixed key=value metadata lines, a header row naming every column,
  // then one row per grid point in row-major axis order.
  void render_csv(std::ostream& os) const {
    for (const auto& [key, val] : metadata_) os << "# " << key << "=" << val << "\n";
    for (std::size_t a = 0; a < axes_.size(); ++a) os << (a ? "," : "") << axes_[a].name;
    for (const std::string& c : columns_) os << "," << c;
    os << "\n";
    for (std::size_t row = 0; row < rows_; ++row) {
      for (std::size_t a = 0; a < axes_.size(); ++a)
        os << (a ? "," : "") << format_double(axis_value(row, a));
      for (std::size_t c = 0; c < columns_.size(); ++c) os << "," << format_double(value(row, c));
      os << "\n";
    }
  }

  std::string to_csv() const {
    std::ostringstream os;
    render_csv(os);
    return os.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json meta = nlohmann::json::object();
    for (const auto& [key, val] : metadata_) meta[key] = val;
    nlohmann::json axes = nlohmann::json::array();
    for (const SweepAxis& ax : axes_) axes.push_back({{"name", ax.name}, {"grid", ax.grid}});
    nlohmann::json cols = nlohmann::json::object();
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      std::vector<nlohmann::json> col(rows_);
      for (std::size_t row = 0; row < rows_; ++row) {
        const double v = value(row, c);
        col[row] = std::isnan(v) ? nlohmann::json() : nlohmann::json(v);  // NaN -> null
      }
      cols[columns_[c]] = col;
    }
    return {{"metadata", meta}, {"axes", axes}, {"values", cols}};
  }

  // Write to `path` via a temporary file plus atomic rename, so a failed or
  // interrupted write never leaves a partial table behind.
  void write_file(const std::filesystem::path& path, SweepFormat format) const {
    const std::filesystem::path tmp = path.string() + ".tmp";
    try {
      {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("cannot open '" + tmp.string() + "' for writing");
        if (format == SweepFormat::csv)
          render_csv(os);
        else
          os << to_json().dump(2) << "\n";
        os.flush();
        if (!os) throw Error("write to '" + tmp.string() + "' failed");
      }
      std::filesystem::rename(tmp, path);
    } catch (...) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw;
    }
  }

 private:
  std::vector<SweepAxis> axes_;
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> metadata_;
  std::vector<double> values_;
  std::size_t rows_ = 0;
};

}  // namespace ico
