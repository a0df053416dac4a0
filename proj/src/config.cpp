#include "cho/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cho/error.hpp"
#include "cho/solver.hpp"

namespace cho {
namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

double parse_real(const std::string& raw) {
  const std::string s = trim(raw);
  // Accept "2/3" style fractions, handy for b.
  if (auto slash = s.find('/'); slash != std::string::npos) {
    const double num = parse_real(s.substr(0, slash));
    const double den = parse_real(s.substr(slash + 1));
    if (den == 0.0) throw DomainError("division by zero in '" + s + "'");
    return num / den;
  }
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw DomainError("not a number: '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& raw) {
  const std::string s = trim(raw);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw DomainError("not an integer: '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "pretty") return OutputFormat::pretty;
  if (s == "plot-data") return OutputFormat::plot_data;
  throw DomainError("unknown format '" + s + "' (csv, pretty, plot-data)");
}

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::pretty: return "pretty";
    case OutputFormat::plot_data: return "plot-data";
  }
  return "csv";
}

void RunConfig::validate() const {
  if (states.empty()) throw DomainError("no states given");
  for (const auto& s : states) QuantumState::from_name(s, 1.0, 1.0);
  if (rc_values.empty()) throw DomainError("no r_c values given");
  for (double rc : rc_values) {
    if (!(rc > 0.0)) throw DomainError("r_c must be positive");
  }
  if (!(omega > 0.0)) throw DomainError("omega must be positive");
  if (b_values.empty()) throw DomainError("no b values given");
  for (double q : {alpha, beta}) {
    if (!(q > 0.0) || q == 1.0) throw DomainError("Renyi orders must be positive and != 1");
  }
  tolerances.validate();
  if (jobs < 0) throw DomainError("jobs must be >= 0");
}

std::vector<double> parse_rc_range(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw DomainError("range must be start:stop:step, got '" + spec + "'");
  const double start = parse_real(parts[0]);
  const double stop = parse_real(parts[1]);
  const double step = parse_real(parts[2]);
  if (!(step > 0.0)) throw DomainError("range step must be positive");
  if (stop < start) throw DomainError("range stop lies below start");
  // Index-based so values don't drift: 0.1 + 79*0.1 is 8.0 after rounding.
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) {
    const double v = start + static_cast<double>(i) * step;
    out.push_back(std::round(v * 1e12) / 1e12);
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_real(item));
  return out;
}

std::vector<std::string> parse_name_list(const std::string& s) { return split(s, ','); }

std::vector<double> parse_b_list(const std::string& s) {
  std::vector<double> out = parse_real_list(s);
  for (double& b : out) {
    if (std::fabs(b - 2.0 / 3.0) <= 5e-5) b = 2.0 / 3.0;
  }
  return out;
}

std::vector<double> default_scan_grid() { return parse_rc_range("0.1:8.0:0.1"); }

void apply_setting(const std::string& key, const std::string& value, RunConfig& cfg) {
  if (key == "states") {
    cfg.states = parse_name_list(value);
  } else if (key == "rc") {
    cfg.rc_values = parse_real_list(value);
  } else if (key == "rc_range") {
    cfg.rc_values = parse_rc_range(value);
  } else if (key == "omega") {
    cfg.omega = parse_real(value);
  } else if (key == "b") {
    cfg.b_values = parse_b_list(value);
  } else if (key == "alpha") {
    cfg.alpha = parse_real(value);
  } else if (key == "beta") {
    cfg.beta = parse_real(value);
  } else if (key == "rel_tol") {
    cfg.tolerances.rel_tol = parse_real(value);
  } else if (key == "abs_tol") {
    cfg.tolerances.abs_tol = parse_real(value);
  } else if (key == "max_panels") {
    cfg.tolerances.max_panels = parse_int(value);
  } else if (key == "base_order") {
    cfg.tolerances.base_order = parse_int(value);
  } else if (key == "cache") {
    cfg.cache_path = trim(value);
    cfg.use_cache = !cfg.cache_path.empty();
  } else if (key == "format") {
    cfg.format = parse_format(trim(value));
  } else if (key == "out") {
    cfg.out = trim(value);
  } else if (key == "jobs") {
    cfg.jobs = parse_int(value);
  } else {
    throw DomainError("unknown setting '" + key + "'");
  }
}

void apply_config(std::istream& in, RunConfig& cfg, const std::string& origin) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DomainError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    try {
      apply_setting(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), cfg);
    } catch (const Error& e) {
      throw DomainError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void apply_config_file(const std::filesystem::path& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  apply_config(in, cfg, path.string());
}

}  // namespace cho
