#include "fuzzyid/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "fuzzyid/error.hpp"

namespace fuzzyid::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  const std::string t = trim(s);
  if (t == "nan") return std::nan("");
  if (t == "inf") return INFINITY;
  if (t == "-inf") return -INFINITY;
  double v = 0;
  const char* first = t.data();
  if (!t.empty() && t.front() == '+') ++first;
  const auto res = std::from_chars(first, t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw DataError("not a number: '" + t + "'");
  return v;
}

long long parse_int(std::string_view s) {
  const std::string t = trim(s);
  long long v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw DataError("not an integer: '" + t + "'");
  return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string Table::to_string() const {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  auto join = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  join(header);
  for (const auto& r : rows) join(r);
  return out;
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw DataError("missing CSV column '" + std::string(name) + "'");
}

Table parse_table(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (line.front() == '#') {
      t.comments.push_back(trim(std::string_view(line).substr(1)));
      continue;
    }
    auto cells = split(line, ',');
    for (auto& c : cells) c = trim(c);
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
    } else {
      if (cells.size() != t.header.size())
        throw DataError("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                        std::to_string(t.header.size()));
      t.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw DataError("CSV has no header row");
  return t;
}

void write_table(const std::filesystem::path& path, const Table& table) {
  write_file_atomic(path, table.to_string());
}

Table read_table(const std::filesystem::path& path) {
  try {
    return parse_table(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& labels) {
  if (static_cast<Eigen::Index>(labels.size()) != m.cols())
    throw DimensionMismatch("write_matrix_csv: one label per column required");
  Table t;
  t.header = labels;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row;
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(format_double(m(i, j)));
    t.rows.push_back(std::move(row));
  }
  write_table(path, t);
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path, std::vector<std::string>* labels) {
  const Table t = read_table(path);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(t.header.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < t.header.size(); ++j) m(i, j) = parse_double(t.rows[i][j]);
  if (labels) *labels = t.header;
  return m;
}

Table plant_table(const plant::PlantDataset& d) {
  Table t;
  t.comments.push_back("signal=" + d.signal);
  t.comments.push_back("seed=" + std::to_string(d.seed));
  t.comments.push_back("pairs start at k=2; y(-1)=y(-2)=0");
  t.header = {"y_km1", "y_km2", "f_target", "u", "y"};
  for (Eigen::Index h = 0; h < d.size(); ++h)
    t.rows.push_back({format_double(d.inputs(h, 0)), format_double(d.inputs(h, 1)),
                      format_double(d.f_targets(h)), format_double(d.u(h)),
                      format_double(d.y_targets(h))});
  return t;
}

void write_plant_csv(const std::filesystem::path& path, const plant::PlantDataset& d) {
  write_table(path, plant_table(d));
}

plant::PlantDataset read_plant_csv(const std::filesystem::path& path) {
  const Table t = read_table(path);
  const auto c1 = t.column("y_km1"), c2 = t.column("y_km2"), cf = t.column("f_target"),
             cu = t.column("u"), cy = t.column("y");
  plant::PlantDataset d;
  const auto n = static_cast<Eigen::Index>(t.rows.size());
  if (n < 1) throw DataError(path.string() + ": dataset has no rows");
  d.inputs.resize(n, 2);
  d.f_targets.resize(n);
  d.u.resize(n);
  d.y_targets.resize(n);
  for (Eigen::Index h = 0; h < n; ++h) {
    const auto& r = t.rows[static_cast<std::size_t>(h)];
    d.inputs(h, 0) = parse_double(r[c1]);
    d.inputs(h, 1) = parse_double(r[c2]);
    d.f_targets(h) = parse_double(r[cf]);
    d.u(h) = parse_double(r[cu]);
    d.y_targets(h) = parse_double(r[cy]);
  }
  for (const auto& c : t.comments) {
    if (c.rfind("signal=", 0) == 0) d.signal = c.substr(7);
    if (c.rfind("seed=", 0) == 0) d.seed = static_cast<std::uint64_t>(parse_int(c.substr(5)));
  }
  return d;
}

}  // namespace fuzzyid::io
