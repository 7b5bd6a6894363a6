#include "dsub/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace dsub {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& value) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  return ec == std::errc() && ptr == end && std::isfinite(value);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

Table read_csv(std::istream& in) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (line_no == 0 || trim(line).empty()) throw Error("csv: missing header row");
  for (auto& name : split_line(line)) table.header.push_back(trim(name));
  const auto q = table.header.size();

  std::vector<double> cells;
  Index rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto parts = split_line(line);
    if (parts.size() != q) {
      throw Error("csv: line " + std::to_string(line_no) + " has " + std::to_string(parts.size()) +
                  " cells, header has " + std::to_string(q));
    }
    for (std::size_t j = 0; j < q; ++j) {
      double v = 0.0;
      if (!parse_double(trim(parts[j]), v)) {
        throw Error("csv: line " + std::to_string(line_no) + ", column " + std::to_string(j + 1) +
                    ": '" + trim(parts[j]) + "' is not a finite number");
      }
      cells.push_back(v);
    }
    ++rows;
  }
  table.values.resize(rows, static_cast<Index>(q));
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < static_cast<Index>(q); ++j)
      table.values(i, j) = cells[static_cast<std::size_t>(i) * q + static_cast<std::size_t>(j)];
  return table;
}

Table read_csv(const std::string& path) {
  auto in = open_in(path);
  return read_csv(in);
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t j = 0; j < table.header.size(); ++j) out << (j ? "," : "") << table.header[j];
  out << '\n' << std::setprecision(17);
  for (Index i = 0; i < table.values.rows(); ++i) {
    for (Index j = 0; j < table.values.cols(); ++j) out << (j ? "," : "") << table.values(i, j);
    out << '\n';
  }
}

void write_csv(const std::string& path, const Table& table) {
  auto out = open_out(path);
  write_csv(out, table);
}

std::vector<Index> read_indices(const std::string& path, bool one_based) {
  auto in = open_in(path);
  std::vector<Index> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty()) continue;
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw Error("index file line " + std::to_string(line_no) + ": '" + text + "' is not an integer");
    }
    v -= one_based ? 1 : 0;
    if (v < 0) throw Error("index file line " + std::to_string(line_no) + ": negative index");
    out.push_back(static_cast<Index>(v));
  }
  return out;
}

void write_indices(std::ostream& out, std::span<const Index> indices, bool one_based) {
  for (Index i : indices) out << (i + (one_based ? 1 : 0)) << '\n';
}

void write_indices(const std::string& path, std::span<const Index> indices, bool one_based) {
  auto out = open_out(path);
  write_indices(out, indices, one_based);
}

Vector read_values(const std::string& path) {
  auto in = open_in(path);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty()) continue;
    double v = 0.0;
    if (!parse_double(text, v) || v < 0.0) {
      throw Error("value file line " + std::to_string(line_no) + ": '" + text +
                  "' is not a finite nonnegative number");
    }
    values.push_back(v);
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

nlohmann::json to_json(const GmmModel<double>& model) {
  nlohmann::json j;
  j["components"] = model.components();
  j["dim"] = model.dim();
  j["weights"] = std::vector<double>(model.weights.data(), model.weights.data() + model.weights.size());
  auto rows = [](const Matrix& m) {
    std::vector<std::vector<double>> out;
    for (Index k = 0; k < m.rows(); ++k) {
      std::vector<double> row(static_cast<std::size_t>(m.cols()));
      for (Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(k, c);
      out.push_back(std::move(row));
    }
    return out;
  };
  j["means"] = rows(model.means);
  j["stds"] = rows(model.stds);
  j["density_floor"] = model.density_floor;
  return j;
}

GmmModel<double> gmm_from_json(const nlohmann::json& j) {
  GmmModel<double> model;
  const auto m = j.at("components").get<Index>();
  const auto q = j.at("dim").get<Index>();
  const auto weights = j.at("weights").get<std::vector<double>>();
  const auto means = j.at("means").get<std::vector<std::vector<double>>>();
  const auto stds = j.at("stds").get<std::vector<std::vector<double>>>();
  if (static_cast<Index>(weights.size()) != m || static_cast<Index>(means.size()) != m ||
      static_cast<Index>(stds.size()) != m) {
    throw Error("gmm json: component count mismatch");
  }
  model.weights = Eigen::Map<const Vector>(weights.data(), m);
  model.means.resize(m, q);
  model.stds.resize(m, q);
  for (Index k = 0; k < m; ++k) {
    if (static_cast<Index>(means[static_cast<std::size_t>(k)].size()) != q ||
        static_cast<Index>(stds[static_cast<std::size_t>(k)].size()) != q) {
      throw Error("gmm json: dimension mismatch in component " + std::to_string(k));
    }
    for (Index c = 0; c < q; ++c) {
      model.means(k, c) = means[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
      model.stds(k, c) = stds[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
    }
  }
  model.density_floor = j.value("density_floor", 0.0);
  return model;
}

}  // namespace dsub
