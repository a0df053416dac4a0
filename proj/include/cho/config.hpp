#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "cho/quadrature.hpp"

namespace cho {

enum class OutputFormat { csv, pretty, plot_data };

OutputFormat parse_format(const std::string& s);
std::string to_string(OutputFormat f);

/// Everything a command needs. Defaults reproduce the published setup.
struct RunConfig {
  std::vector<std::string> states{"1s", "2s", "1p", "1d"};
  std::vector<double> rc_values;
  double omega = 1.0;
  std::vector<double> b_values{2.0 / 3.0, 1.0};
  double alpha = 0.6;
  double beta = 3.0;
  QuadratureSpec tolerances{};
  std::filesystem::path cache_path{"cho_eigen_cache.txt"};
  bool use_cache = true;
  OutputFormat format = OutputFormat::csv;
  std::filesystem::path out;  // empty: stdout
  int jobs = 0;               // 0: OpenMP default

  /// Throws DomainError on an unusable combination.
  void validate() const;
};

/// "start:stop:step", inclusive of stop up to rounding. start == stop gives
/// one point.
std::vector<double> parse_rc_range(const std::string& spec);
/// Comma separated reals or labels.
std::vector<double> parse_real_list(const std::string& s);
std::vector<std::string> parse_name_list(const std::string& s);
/// Like parse_real_list, but a value that rounds to 2/3 at four decimals
/// (0.6667) selects the exact 2/3 preset.
std::vector<double> parse_b_list(const std::string& s);

/// Default scan grid 0.1, 0.2, ..., 8.0.
std::vector<double> default_scan_grid();

/// Flat `key = value` lines; `#` starts a comment. Unknown keys are errors.
void apply_config(std::istream& in, RunConfig& cfg, const std::string& origin = "<config>");
void apply_config_file(const std::filesystem::path& path, RunConfig& cfg);
/// Single key/value, shared by the file reader and tests.
void apply_setting(const std::string& key, const std::string& value, RunConfig& cfg);

}  // namespace cho
