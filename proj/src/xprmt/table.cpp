#include "normalkit/xprmt/table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace normalkit::xprmt {

using nlohmann::json;

namespace {

json cell_json(const Cell& c, const Slack* s) {
  json j = json::object();
  if (c.dash()) {
    j["dash"] = true;
    if (!c.reason.empty()) j["reason"] = c.reason;
    if (c.error) j["error"] = true;
  } else {
    j["iterations"] = *c.iterations;
  }
  if (s) {
    if (s->abs) j["abs"] = *s->abs;
    if (s->rel) j["rel"] = *s->rel;
    if (s->min) j["min"] = *s->min;
    if (s->max) j["max"] = *s->max;
  }
  return j;
}

Slack slack_json(const json& j, Slack base) {
  if (j.contains("abs")) base.abs = j.at("abs").get<double>();
  if (j.contains("rel")) base.rel = j.at("rel").get<double>();
  if (j.contains("min")) base.min = j.at("min").get<Index>();
  if (j.contains("max")) base.max = j.at("max").get<Index>();
  return base;
}

std::vector<std::string> labels(const json& j, const char* key) {
  std::vector<std::string> out;
  for (const auto& v : j.at(key)) out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  return out;
}

std::string show(const Cell& c) { return c.dash() ? "-" : std::to_string(*c.iterations); }

}  // namespace

bool TableResult::has_errors() const {
  for (const auto& row : cells)
    for (const auto& c : row)
      if (c.error) return true;
  return false;
}

json to_json(const TableResult& t) {
  json j;
  j["name"] = t.name;
  j["row_label"] = t.row_label;
  j["rows"] = t.rows;
  j["columns"] = t.columns;
  json cells = json::array();
  for (std::size_t r = 0; r < t.cells.size(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < t.cells[r].size(); ++c) {
      const Slack* s = t.slack.empty() ? nullptr : &t.slack[r][c];
      row.push_back(cell_json(t.cells[r][c], s));
    }
    cells.push_back(std::move(row));
  }
  j["cells"] = std::move(cells);
  j["metadata"] = t.metadata;
  return j;
}

TableResult table_from_json(const json& j) {
  TableResult t;
  try {
    t.name = j.value("name", "");
    t.row_label = j.value("row_label", "");
    t.rows = labels(j, "rows");
    t.columns = labels(j, "columns");
    if (j.contains("metadata")) t.metadata = j.at("metadata");
    const Slack base = j.contains("slack") ? slack_json(j.at("slack"), {}) : Slack{};
    const json& cells = j.at("cells");
    if (cells.size() != t.rows.size()) throw ConfigError("table " + t.name + ": row count does not match labels");
    bool any_slack = j.contains("slack");
    for (const auto& row : cells) {
      if (row.size() != t.columns.size()) {
        throw ConfigError("table " + t.name + ": column count does not match labels");
      }
      std::vector<Cell> cr;
      std::vector<Slack> sr;
      for (const auto& v : row) {
        if (v.is_number_integer()) {
          cr.push_back(Cell::count(v.get<Index>()));
          sr.push_back(base);
        } else if (v.is_string() && v.get<std::string>() == "-") {
          cr.push_back(Cell::dash_cell(""));
          sr.push_back(base);
        } else if (v.is_object()) {
          if (v.value("dash", false)) {
            cr.push_back(Cell::dash_cell(v.value("reason", ""), v.value("error", false)));
          } else {
            cr.push_back(Cell::count(v.at("iterations").get<Index>()));
          }
          for (const char* k : {"abs", "rel", "min", "max"}) any_slack = any_slack || v.contains(k);
          sr.push_back(slack_json(v, base));
        } else {
          throw ConfigError("table " + t.name + ": unreadable cell " + v.dump());
        }
      }
      t.cells.push_back(std::move(cr));
      t.slack.push_back(std::move(sr));
    }
    if (!any_slack) t.slack.clear();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed table: ") + e.what());
  }
  return t;
}

TableResult load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return table_from_json(j);
}

void save_table_json(const std::string& path, const TableResult& t) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << to_json(t).dump(2) << '\n';
}

void write_table_csv(std::ostream& out, const TableResult& t) {
  out << t.row_label;
  for (const auto& c : t.columns) out << ',' << c;
  out << '\n';
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out << t.rows[r];
    for (const auto& c : t.cells[r]) out << ',' << show(c);
    out << '\n';
  }
}

void print_table(std::ostream& out, const TableResult& t) {
  std::size_t w0 = t.row_label.size();
  for (const auto& r : t.rows) w0 = std::max(w0, r.size());
  std::vector<std::size_t> w;
  for (const auto& c : t.columns) w.push_back(std::max<std::size_t>(c.size(), 6));
  out << t.name << '\n' << std::left << std::setw(static_cast<int>(w0)) << t.row_label;
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << "  " << std::right << std::setw(static_cast<int>(w[c])) << t.columns[c];
  out << '\n';
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out << std::left << std::setw(static_cast<int>(w0)) << t.rows[r];
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      out << "  " << std::right << std::setw(static_cast<int>(w[c])) << show(t.cells[r][c]);
    }
    out << '\n';
  }
}

CompareReport compare(const TableResult& result, const TableResult& golden) {
  if (result.rows != golden.rows || result.columns != golden.columns) {
    throw DimensionError("table shapes differ: " + result.name + " vs " + golden.name);
  }
  CompareReport rep;
  for (std::size_t r = 0; r < golden.rows.size(); ++r) {
    for (std::size_t c = 0; c < golden.columns.size(); ++c) {
      const Cell& got = result.cells[r][c];
      const Cell& want = golden.cells[r][c];
      const Slack s = golden.slack.empty() ? Slack{} : golden.slack[r][c];
      CellVerdict v{r, c, false, {}};
      if (want.dash() || got.dash()) {
        v.passed = want.dash() && got.dash();
        if (!v.passed) v.detail = "got " + show(got) + ", expected " + show(want);
      } else {
        const double k = static_cast<double>(*got.iterations);
        const double e = static_cast<double>(*want.iterations);
        bool ok = true;
        if (s.abs || s.rel) {
          const double allow = std::max(s.abs.value_or(0.0), s.rel.value_or(0.0) * e);
          ok = std::abs(k - e) <= allow + 1e-9;
        } else if (!s.min && !s.max) {
          ok = k == e;
        }
        if (s.min && *got.iterations < *s.min) ok = false;
        if (s.max && *got.iterations > *s.max) ok = false;
        v.passed = ok;
        if (!ok) v.detail = "got " + show(got) + ", expected " + show(want);
      }
      rep.passed = rep.passed && v.passed;
      rep.cells.push_back(std::move(v));
    }
  }
  return rep;
}

void print_report(std::ostream& out, const TableResult& result, const TableResult& golden,
                  const CompareReport& report) {
  for (const auto& v : report.cells) {
    out << (v.passed ? "ok   " : "FAIL ") << golden.row_label << '=' << golden.rows[v.row] << ' '
        << golden.columns[v.column] << ": " << show(result.cells[v.row][v.column]) << " (expected "
        << show(golden.cells[v.row][v.column]) << ")\n";
  }
  out << (report.passed ? "match" : "mismatch") << '\n';
}

}  // namespace normalkit::xprmt
