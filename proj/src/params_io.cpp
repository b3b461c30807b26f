#include "tcsim/params_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <vector>

namespace tcsim {

namespace {

struct Field {
  std::string key;
  std::string unit;
  double CircuitParams::*member = nullptr;  // null for junction energies
  int junction = 0;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    for (int j = 1; j <= 10; ++j) f.push_back({"EJ" + std::to_string(j), "GHz", nullptr, j});
    f.push_back({"C2", "fF", &CircuitParams::c2});
    f.push_back({"C3", "fF", &CircuitParams::c3});
    f.push_back({"C4", "fF", &CircuitParams::c4});
    f.push_back({"C5", "fF", &CircuitParams::c5});
    f.push_back({"C6", "fF", &CircuitParams::c6});
    f.push_back({"CJ1", "fF", &CircuitParams::cj1});
    f.push_back({"CJ2", "fF", &CircuitParams::cj2});
    f.push_back({"CJ3", "fF", &CircuitParams::cj3});
    f.push_back({"CJ8", "fF", &CircuitParams::cj8});
    f.push_back({"CJ9", "fF", &CircuitParams::cj9});
    f.push_back({"CJ10", "fF", &CircuitParams::cj10});
    f.push_back({"C23", "fF", &CircuitParams::c23});
    f.push_back({"C26", "fF", &CircuitParams::c26});
    f.push_back({"C34", "fF", &CircuitParams::c34});
    f.push_back({"C35", "fF", &CircuitParams::c35});
    f.push_back({"C45", "fF", &CircuitParams::c45});
    f.push_back({"C56", "fF", &CircuitParams::c56});
    return f;
  }();
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

CircuitParams parse_params(std::istream& in, const std::string& source) {
  std::map<std::string, const Field*> by_key;
  for (const auto& f : fields()) by_key[f.key] = &f;

  CircuitParams p;
  std::map<std::string, int> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    auto where = [&] { return source + ":" + std::to_string(lineno) + ": "; };
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParamsFormatError(where() + "expected 'name = value unit'");
    const std::string key = trim(line.substr(0, eq));
    std::istringstream rhs(line.substr(eq + 1));
    std::string value_text, unit, extra;
    rhs >> value_text >> unit;
    if (rhs >> extra) throw ParamsFormatError(where() + "trailing text after unit");

    const auto it = by_key.find(key);
    if (it == by_key.end()) throw ParamsFormatError(where() + "unknown key '" + key + "'");
    if (seen[key]++) throw ParamsFormatError(where() + "duplicate key '" + key + "'");
    if (unit != it->second->unit)
      throw ParamsFormatError(where() + "key '" + key + "' needs unit " + it->second->unit);

    double value = 0.0;
    const auto* first = value_text.data();
    const auto* last = first + value_text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || value_text.empty())
      throw ParamsFormatError(where() + "malformed number '" + value_text + "'");

    const Field& f = *it->second;
    if (f.member)
      p.*f.member = value;
    else
      p.ej(f.junction) = value;
  }
  for (const auto& f : fields())
    if (!seen.count(f.key)) throw ParamsFormatError(source + ": missing key '" + f.key + "'");

  try {
    p.validate();
  } catch (const InvalidParams& e) {
    throw ParamsFormatError(source + ": " + e.what());
  }
  return p;
}

CircuitParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParamsFormatError("cannot open parameter file " + path.string());
  return parse_params(in, path.string());
}

void write_params(std::ostream& out, const CircuitParams& p, const std::string& header) {
  if (!header.empty()) {
    std::istringstream lines(header);
    std::string l;
    while (std::getline(lines, l)) out << "# " << l << '\n';
  }
  out << std::setprecision(17);
  for (const auto& f : fields()) {
    const double v = f.member ? p.*f.member : p.ej(f.junction);
    out << f.key << " = " << v << ' ' << f.unit << '\n';
  }
}

void save_params(const std::filesystem::path& path, const CircuitParams& p, const std::string& header) {
  std::ofstream out(path);
  if (!out) throw ParamsFormatError("cannot write parameter file " + path.string());
  write_params(out, p, header);
}

}  // namespace tcsim
