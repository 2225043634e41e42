#include "rff/result_io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "rff/errors.hpp"

namespace rff {

std::vector<std::pair<std::string, std::string>> RunManifest::lines() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("subcommand", subcommand);
  if (!config_path.empty()) out.emplace_back("config", config_path);
  if (!out_dir.empty()) out.emplace_back("out", out_dir);
  out.emplace_back("seed", std::to_string(seed));
  if (!timestamp.empty()) out.emplace_back("timestamp", timestamp);
  for (const auto& kv : parameters) out.push_back(kv);
  return out;
}

void write_result_csv(const ExperimentResult& result, const RunManifest& manifest,
                      std::ostream& os, const std::string& t_label) {
  for (const auto& [k, v] : manifest.lines()) os << "# " << k << " = " << v << "\n";
  for (const auto& [k, v] : result.meta) os << "# " << k << " = " << v << "\n";
  os << t_label;
  for (const auto& [name, values] : result.series) os << ',' << name;
  os << "\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < result.t.size(); ++i) {
    os << result.t[i];
    for (const auto& [name, values] : result.series)
      os << ',' << (i < values.size() ? values[i]
                                      : std::numeric_limits<double>::quiet_NaN());
    os << "\n";
  }
}

void write_result_csv_file(const ExperimentResult& result,
                           const RunManifest& manifest, const std::string& path,
                           const std::string& t_label) {
  std::ofstream os(path);
  if (!os) throw NumericalError("cannot open output file " + path);
  write_result_csv(result, manifest, os, t_label);
}

ExperimentResult read_result_csv(std::istream& is) {
  ExperimentResult r;
  std::string line;
  bool have_header = false;
  std::vector<std::vector<double>*> columns;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        auto trim = [](std::string s) {
          const auto b = s.find_first_not_of(" \t#");
          const auto e = s.find_last_not_of(" \t\r");
          return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        r.meta.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
      }
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    if (!have_header) {
      bool first = true;
      while (std::getline(row, cell, ',')) {
        if (!first) columns.push_back(&r.add_series(cell));
        first = false;
      }
      have_header = true;
      continue;
    }
    std::size_t col = 0;
    while (std::getline(row, cell, ',')) {
      const double v = std::stod(cell);
      if (col == 0)
        r.t.push_back(v);
      else if (col - 1 < columns.size())
        columns[col - 1]->push_back(v);
      ++col;
    }
  }
  return r;
}

}  // namespace rff
