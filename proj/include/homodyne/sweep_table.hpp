#pragma once

// Tabular results with a fixed column schema and provenance metadata.
//
// CSV: '#'-prefixed `key = value` metadata lines, one header line, then the
// rows. Divergent cells are the literal `inf`.
// JSON: {"schema_version", "tables": [{name, metadata, columns, rows}]};
// divergent cells are {"value": null, "reason": ...}.

#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "homodyne/config.hpp"

namespace homodyne {

inline constexpr int kSchemaVersion = 1;

struct Divergent {
  std::string reason;
  bool operator==(const Divergent&) const = default;
};

using Cell = std::variant<double, std::string, Divergent>;

class SweepTable {
 public:
  SweepTable(std::string name, std::vector<std::string> columns);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  const KeyValues& metadata() const { return metadata_; }

  /// Throws std::logic_error when the row width does not match the schema.
  void add_row(std::vector<Cell> row);
  void set_metadata(const std::string& key, const std::string& value);

  std::size_t column_index(const std::string& column) const;
  /// Numeric column; divergent cells read as +inf. Throws on text cells.
  std::vector<double> numbers(const std::string& column) const;
  const Cell& at(std::size_t row, const std::string& column) const;

  bool operator==(const SweepTable&) const = default;

 private:
  std::string name_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  KeyValues metadata_;
};

/// Provenance block: command, every config key, config hash, seed, version.
void stamp(SweepTable& table, const std::string& command, const ExperimentConfig& cfg);

const char* tool_version();

void write_csv(std::ostream& os, const SweepTable& table);
std::string to_csv(const SweepTable& table);
nlohmann::json to_json(const SweepTable& table);
nlohmann::json to_json(const std::vector<SweepTable>& tables);

/// Metadata lines of a CSV document, in order of appearance.
std::map<std::string, std::string> read_csv_metadata(const std::string& csv);

/// The command and configuration recorded in a table's metadata.
struct Provenance {
  std::string command;
  ExperimentConfig config;
};
Provenance provenance_of(const std::map<std::string, std::string>& metadata);

/// Writes tables to `cfg.out` (stdout when unset) in `cfg.format`. Several
/// CSV tables going to a file are split into `<stem>_<table>.csv`.
void emit(const std::vector<SweepTable>& tables, const ExperimentConfig& cfg, std::ostream& stdout_stream);

}  // namespace homodyne
