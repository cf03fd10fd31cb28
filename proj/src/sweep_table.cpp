#include "homodyne/sweep_table.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "homodyne/errors.hpp"

#ifndef HOMODYNE_VERSION
#define HOMODYNE_VERSION "0.0.0"
#endif

namespace homodyne {

namespace {

constexpr std::string_view kConfigPrefix = "config.";

std::string csv_text(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  if (std::holds_alternative<Divergent>(cell)) return "inf";
  const std::string& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

nlohmann::json json_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* v = std::get_if<Divergent>(&cell)) return {{"value", nullptr}, {"reason", v->reason}};
  return std::get<std::string>(cell);
}

}  // namespace

const char* tool_version() { return HOMODYNE_VERSION; }

SweepTable::SweepTable(std::string name, std::vector<std::string> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {
  if (columns_.empty()) throw std::logic_error("table needs at least one column");
}

void SweepTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw std::logic_error(fmt::format("table {}: row has {} cells, schema has {}", name_, row.size(), columns_.size()));
  }
  rows_.push_back(std::move(row));
}

void SweepTable::set_metadata(const std::string& key, const std::string& value) {
  for (auto& [k, v] : metadata_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  metadata_.emplace_back(key, value);
}

std::size_t SweepTable::column_index(const std::string& column) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == column) return i;
  }
  throw std::out_of_range(fmt::format("table {} has no column '{}'", name_, column));
}

std::vector<double> SweepTable::numbers(const std::string& column) const {
  const std::size_t c = column_index(column);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) {
    if (const auto* d = std::get_if<double>(&row[c])) {
      out.push_back(*d);
    } else if (std::holds_alternative<Divergent>(row[c])) {
      out.push_back(std::numeric_limits<double>::infinity());
    } else {
      throw std::logic_error(fmt::format("table {}: column '{}' holds text", name_, column));
    }
  }
  return out;
}

const Cell& SweepTable::at(std::size_t row, const std::string& column) const { return rows_.at(row)[column_index(column)]; }

void stamp(SweepTable& table, const std::string& command, const ExperimentConfig& cfg) {
  table.set_metadata("table", table.name());
  table.set_metadata("command", command);
  for (const auto& [k, v] : to_kv(cfg)) table.set_metadata(std::string(kConfigPrefix) + k, v);
  table.set_metadata("config-hash", config_hash(cfg));
  table.set_metadata("seed", std::to_string(seed(cfg)));
  table.set_metadata("tool-version", tool_version());
}

void write_csv(std::ostream& os, const SweepTable& table) {
  for (const auto& [k, v] : table.metadata()) os << "# " << k << " = " << v << '\n';
  for (std::size_t i = 0; i < table.columns().size(); ++i) os << (i ? "," : "") << table.columns()[i];
  os << '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_text(row[i]);
    os << '\n';
  }
}

std::string to_csv(const SweepTable& table) {
  std::ostringstream ss;
  write_csv(ss, table);
  return ss.str();
}

nlohmann::json to_json(const SweepTable& table) {
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : table.metadata()) meta[k] = v;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows()) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& cell : row) r.push_back(json_cell(cell));
    rows.push_back(std::move(r));
  }
  return {{"name", table.name()}, {"metadata", meta}, {"columns", table.columns()}, {"rows", rows}};
}

nlohmann::json to_json(const std::vector<SweepTable>& tables) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& t : tables) list.push_back(to_json(t));
  return {{"schema_version", kSchemaVersion}, {"tables", list}};
}

std::map<std::string, std::string> read_csv_metadata(const std::string& csv) {
  std::map<std::string, std::string> meta;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) != 0) continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    meta[line.substr(2, eq - 2)] = line.substr(eq + 3);
  }
  return meta;
}

Provenance provenance_of(const std::map<std::string, std::string>& metadata) {
  Provenance p;
  std::map<std::string, std::string> kv;
  for (const auto& [k, v] : metadata) {
    if (k == "command") p.command = v;
    if (k.rfind(kConfigPrefix, 0) == 0) kv[k.substr(kConfigPrefix.size())] = v;
  }
  if (p.command.empty()) throw ValidationError("metadata carries no command");
  p.config = from_kv(kv);
  return p;
}

void emit(const std::vector<SweepTable>& tables, const ExperimentConfig& cfg, std::ostream& stdout_stream) {
  const OutputFormat format = cfg.format.value_or(OutputFormat::csv);
  auto open = [](const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ValidationError(fmt::format("cannot write '{}'", path));
    return f;
  };
  if (format == OutputFormat::json) {
    const std::string text = to_json(tables).dump(2) + "\n";
    if (cfg.out) {
      auto f = open(*cfg.out);
      f << text;
    } else {
      stdout_stream << text;
    }
    return;
  }
  if (!cfg.out) {
    for (std::size_t i = 0; i < tables.size(); ++i) {
      if (i) stdout_stream << '\n';
      write_csv(stdout_stream, tables[i]);
    }
    return;
  }
  if (tables.size() == 1) {
    auto f = open(*cfg.out);
    write_csv(f, tables.front());
    return;
  }
  const std::filesystem::path base(*cfg.out);
  const std::string ext = base.has_extension() ? base.extension().string() : ".csv";
  for (const auto& t : tables) {
    std::filesystem::path p = base;
    p.replace_filename(base.stem().string() + "_" + t.name() + ext);
    auto f = open(p.string());
    write_csv(f, t);
  }
}

}  // namespace homodyne
