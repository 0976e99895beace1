#pragma once

// CSV and plain-text file helpers. Numbers are written in shortest
// round-trip form so outputs are byte-stable and lossless.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "fuzzyid/plant.hpp"

namespace fuzzyid::io {

std::string format_double(double v);
double parse_double(std::string_view s);
long long parse_int(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::string trim(std::string_view s);

/// Writes via a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// In-memory table: optional '#' comment lines, a header row, data rows.
struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const;
  std::size_t column(std::string_view name) const;  // throws DataError if absent
};

Table parse_table(const std::string& text);
void write_table(const std::filesystem::path& path, const Table& table);
Table read_table(const std::filesystem::path& path);

/// Row-major matrix with a header of column labels.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& labels);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path,
                                std::vector<std::string>* labels = nullptr);

/// Columns y_km1, y_km2, f_target, u, y; signal and seed in comment lines.
Table plant_table(const plant::PlantDataset& d);
void write_plant_csv(const std::filesystem::path& path, const plant::PlantDataset& d);
plant::PlantDataset read_plant_csv(const std::filesystem::path& path);

}  // namespace fuzzyid::io
