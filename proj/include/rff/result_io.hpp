#pragma once

// CSV serialization of experiment results: '#'-prefixed manifest lines,
// a header row, then one row per time point.

#include <iosfwd>
#include <string>
#include <vector>

#include "rff/evolution.hpp"

namespace rff {

struct RunManifest {
  std::string subcommand;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string timestamp;  // empty by default so reruns are byte-identical
  std::vector<std::pair<std::string, std::string>> parameters;

  std::vector<std::pair<std::string, std::string>> lines() const;
};

void write_result_csv(const ExperimentResult& result, const RunManifest& manifest,
                      std::ostream& os, const std::string& t_label = "t");

void write_result_csv_file(const ExperimentResult& result,
                           const RunManifest& manifest, const std::string& path,
                           const std::string& t_label = "t");

// Parses a CSV written by write_result_csv (manifest lines are returned in
// meta).  Used by tests and downstream tooling.
ExperimentResult read_result_csv(std::istream& is);

}  // namespace rff
