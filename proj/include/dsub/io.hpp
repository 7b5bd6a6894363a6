#pragma once

#include "dsub/gmm.hpp"
#include "dsub/types.hpp"

#include <json.hpp>

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dsub {

struct Table {
  std::vector<std::string> header;
  Matrix values;
};

/// Comma-separated, one header row, '.' decimals. Every cell must parse as
/// a finite number; errors name the 1-based line and column.
Table read_csv(std::istream& in);
Table read_csv(const std::string& path);
void write_csv(std::ostream& out, const Table& table);
void write_csv(const std::string& path, const Table& table);

/// One index per line; stored 0-based in memory.
std::vector<Index> read_indices(const std::string& path, bool one_based);
void write_indices(std::ostream& out, std::span<const Index> indices, bool one_based);
void write_indices(const std::string& path, std::span<const Index> indices, bool one_based);

/// One nonnegative real per line (per-row target values).
Vector read_values(const std::string& path);

nlohmann::json to_json(const GmmModel<double>& model);
GmmModel<double> gmm_from_json(const nlohmann::json& j);

}  // namespace dsub
