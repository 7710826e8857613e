#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "normalkit/core.hpp"

namespace normalkit::xprmt {

/// One table entry: an iteration count or DASH for a run that did not converge.
struct Cell {
  std::optional<Index> iterations;
  /// Termination reason for DASH cells ("max-iter", "breakdown", or the error
  /// text when the solver threw).
  std::string reason;
  /// Set when the run threw instead of terminating.
  bool error = false;

  bool dash() const { return !iterations.has_value(); }
  static Cell count(Index k) { return Cell{k, {}, false}; }
  static Cell dash_cell(std::string why, bool error = false) { return Cell{std::nullopt, std::move(why), error}; }
};

/// Allowed deviation of a result cell from its expected value. With both abs
/// and rel set the larger allowance applies; with neither, only min/max are
/// checked.
struct Slack {
  std::optional<double> abs;
  std::optional<double> rel;
  std::optional<Index> min;
  std::optional<Index> max;
};

struct TableResult {
  std::string name;
  std::string row_label;
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  /// cells[row][column].
  std::vector<std::vector<Cell>> cells;
  /// Golden tables only: per-cell slack, same shape as cells when present.
  std::vector<std::vector<Slack>> slack;
  nlohmann::json metadata = nlohmann::json::object();

  const Cell& at(std::size_t r, std::size_t c) const { return cells.at(r).at(c); }
  bool has_errors() const;
};

nlohmann::json to_json(const TableResult& t);
/// Accepts cells as integers, "-" for DASH, or objects with `iterations` /
/// `dash` plus optional slack keys `abs`, `rel`, `min`, `max`. A top-level
/// `slack` object sets the default for every cell. Throws ConfigError on
/// malformed input.
TableResult table_from_json(const nlohmann::json& j);
TableResult load_table(const std::string& path);
void save_table_json(const std::string& path, const TableResult& t);

/// `row_label,<col>,...` then one row per parameter; DASH cells print as `-`.
void write_table_csv(std::ostream& out, const TableResult& t);
/// Aligned plain-text rendering for terminals.
void print_table(std::ostream& out, const TableResult& t);

struct CellVerdict {
  std::size_t row = 0;
  std::size_t column = 0;
  bool passed = false;
  std::string detail;
};

struct CompareReport {
  bool passed = true;
  std::vector<CellVerdict> cells;
};

/// Cell-by-cell check of `result` against `golden` under the golden slack.
/// DASH only matches DASH. Throws DimensionError if shapes or labels differ.
CompareReport compare(const TableResult& result, const TableResult& golden);
void print_report(std::ostream& out, const TableResult& result, const TableResult& golden,
                  const CompareReport& report);

}  // namespace normalkit::xprmt
