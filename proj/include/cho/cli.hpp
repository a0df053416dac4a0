#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cho/config.hpp"
#include "cho/measures.hpp"

namespace cho {

class EigenvalueCache;

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int numerical = 2;
inline constexpr int tolerance = 3;
}  // namespace exit_code

/// One computed point. `error` is set when any stage failed.
struct Record {
  std::string state;
  double r_c = 0.0;
  double b = 0.0;
  std::optional<MeasureSet> measures;
  std::optional<ComplexityReport> report;
  std::string error;

  bool ok() const { return error.empty(); }
};

/// Measure sets for every (state, r_c) pair, in (state, r_c) order. Points run
/// in parallel; output order never depends on scheduling.
struct PointResult {
  std::string state;
  double r_c = 0.0;
  std::optional<MeasureSet> measures;
  std::string error;
};
std::vector<PointResult> compute_points(const std::vector<std::string>& states,
                                        const std::vector<double>& rc_values, const RunConfig& cfg,
                                        EigenvalueCache* cache);

/// Expands points into (state, r_c ascending, b) records.
std::vector<Record> compute_records(const RunConfig& cfg, EigenvalueCache* cache);

/// Fixed notation, `digits` significant digits.
std::string format_fixed(double x, int digits = 10);
/// Scientific notation for deviations.
std::string format_sci(double x);

std::vector<std::string> record_columns();
void write_records(std::ostream& os, const std::vector<Record>& recs, OutputFormat fmt);

/// Re-reads a compute CSV and checks the total identities row by row.
/// Returns the number of offending rows; details go to `log`.
int verify_records(std::istream& in, std::ostream& log, double rel_tol = 1e-9);

// ---- golden tables ----

enum class ComplexityKind { es, er, is, ir };
ComplexityKind parse_complexity_kind(const std::string& s);
std::string to_string(ComplexityKind k);
const Triple& pick(const ComplexityReport& rep, ComplexityKind k);

struct GoldenRow {
  std::string state;
  double r_c = 0.0;
  double r = 0.0;
  double p = 0.0;
  double t = 0.0;
  // Digits as printed, for auditing.
  std::string r_text, p_text, t_text;
};

struct GoldenTable {
  std::string id;
  std::string source;
  ComplexityKind kind = ComplexityKind::es;
  double b = 1.0;
  std::vector<GoldenRow> rows;
};

std::filesystem::path default_data_dir();
/// Reads `table_<id>.csv`; a missing file raises Error naming it.
GoldenTable load_golden(const std::string& id, const std::filesystem::path& dir);

/// Table layout without reference values, for S1..S4.
struct TableLayout {
  std::string id;
  ComplexityKind kind;
  double b;
  std::vector<std::string> states;
  std::vector<double> rc_values;
  bool has_reference;
};
TableLayout table_layout(const std::string& id);

struct Cell {
  std::string state;
  double r_c = 0.0;
  char column = 'r';  // r, p or t
  double computed = 0.0;
  std::optional<double> reference;
  std::string reference_text;
  std::string error;

  double rel_dev() const;
};

std::vector<Cell> reproduce_table(const TableLayout& layout, const GoldenTable* golden,
                                  const RunConfig& cfg, EigenvalueCache* cache);

// ---- scan ----

struct ScanOutput {
  std::vector<std::filesystem::path> files;
  int failed_points = 0;
};

/// Extremum summary of one curve.
struct CurveShape {
  std::size_t argmin = 0;
  std::size_t argmax = 0;
  bool interior_min = false;
  bool interior_max = false;
};
CurveShape curve_shape(const std::vector<double>& y);

ScanOutput run_scan(const RunConfig& cfg, const std::filesystem::path& dir, EigenvalueCache* cache,
                    std::ostream& log);

/// Entry point behind the executable.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace cho
