#pragma once

// Plot-ready tables. Numbers use the shortest round-trip representation so
// identical results always produce identical bytes.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace tcsim {

struct Table {
  std::vector<std::pair<std::string, std::string>> meta;  // written as "# key: value"
  std::vector<std::string> columns;                       // names carry their unit suffix
  std::vector<std::vector<double>> rows;
};

std::string format_number(double value);

void write_csv(std::ostream& out, const Table& table);
/// {"meta": {...}, "columns": [...], "rows": [[...], ...]}
nlohmann::ordered_json table_json(const Table& table);

/// Writes `text` to `path`, or to stdout when path is empty or "-".
void write_output(const std::filesystem::path& path, const std::string& text);

}  // namespace tcsim
