#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "caustica/caustics.hpp"
#include "caustica/pencil.hpp"
#include "caustica/svg.hpp"

namespace caustica {

// flat "[section]" + "key = value" config; one scenario per file
struct ConfigMap {
  std::map<std::string, std::map<std::string, std::string>> kv;

  bool has(const std::string& sec, const std::string& key) const;
  std::string get(const std::string& sec, const std::string& key) const;
  std::string get_or(const std::string& sec, const std::string& key,
                     const std::string& fallback) const;
  double num(const std::string& sec, const std::string& key) const;
  double num_or(const std::string& sec, const std::string& key, double fallback) const;
  std::vector<double> num_list(const std::string& sec, const std::string& key) const;
};

ConfigMap parse_config(const std::string& text);
ConfigMap load_config(const std::string& path);

struct ReportRow {
  std::string check_id;
  int sample_id = 0;
  double residual = 0;
  bool pass = true;
};

struct Report {
  std::string scenario;
  std::vector<ReportRow> rows;
  double max_residual = 0;
  bool pass = true;
  std::vector<std::string> notes;      // human-readable summary lines
  std::string svg;                     // empty when the scenario draws nothing
};

struct RunOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> tol;
  bool write_files = true;
};

Report run_scenario_config(const ConfigMap& cfg, const RunOptions& opt);
// parses, runs, writes <out_dir>/<name>.csv (and .svg when produced)
Report run_scenario(const std::string& path, const RunOptions& opt);

std::string report_to_csv(const Report& r);
void write_text_file(const std::string& path, const std::string& content);

// shared table construction (also used by the CLI for ad-hoc runs)
ConicBoundary table_from_config(const ConfigMap& cfg);
TransversalField field_from_config(const ConfigMap& cfg);

}  // namespace caustica
