#include "cho/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "cho/eigen_cache.hpp"
#include "cho/error.hpp"
#include "cho/kernels.hpp"

namespace cho {
namespace fs = std::filesystem;

// ---------------------------------------------------------------- compute

std::vector<PointResult> compute_points(const std::vector<std::string>& states,
                                        const std::vector<double>& rc_values, const RunConfig& cfg,
                                        EigenvalueCache* cache) {
  std::vector<PointResult> out(states.size() * rc_values.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = 0; j < rc_values.size(); ++j) {
      out[i * rc_values.size() + j].state = states[i];
      out[i * rc_values.size() + j].r_c = rc_values[j];
    }
  }
  PipelineOptions opts;
  opts.quadrature = cfg.tolerances;

  const long n = static_cast<long>(out.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long k = 0; k < n; ++k) {
    PointResult& pt = out[static_cast<std::size_t>(k)];
    try {
      const QuantumState st = QuantumState::from_name(pt.state, pt.r_c, cfg.omega);
      pt.measures = measure_set(st, cfg.alpha, cfg.beta, opts, cache);
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
  }
  return out;
}

std::vector<Record> compute_records(const RunConfig& cfg, EigenvalueCache* cache) {
  std::vector<double> rcs = cfg.rc_values;
  std::sort(rcs.begin(), rcs.end());
  const auto points = compute_points(cfg.states, rcs, cfg, cache);
  std::vector<Record> out;
  out.reserve(points.size() * cfg.b_values.size());
  for (const auto& pt : points) {
    for (double b : cfg.b_values) {
      Record rec;
      rec.state = pt.state;
      rec.r_c = pt.r_c;
      rec.b = b;
      rec.error = pt.error;
      if (pt.measures) {
        rec.measures = pt.measures;
        try {
          rec.report = complexity_report(*pt.measures, b);
        } catch (const std::exception& e) {
          rec.error = e.what();
        }
      }
      out.push_back(std::move(rec));
    }
  }
  return out;
}

// ---------------------------------------------------------------- formatting

std::string format_fixed(double x, int digits) {
  if (!std::isfinite(x)) return "nan";
  if (x == 0.0) return "0";
  const int e = static_cast<int>(std::floor(std::log10(std::fabs(x))));
  const int decimals = std::clamp(digits - 1 - e, 0, 40);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

std::string format_sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::vector<std::string> record_columns() {
  return {"state", "r_c",  "omega", "b",    "alpha", "beta",  "energy", "S_r",   "S_p",
          "S_t",   "R_r",  "R_p",   "R_t",  "E_r",   "E_p",   "E_t",    "I_r",   "I_p",
          "I_t",   "r2",   "rm2",   "p2",   "pm2",   "parseval", "C_ES_r", "C_ES_p", "C_ES_t",
          "C_ER_r", "C_ER_p", "C_ER_t", "C_IS_r", "C_IS_p", "C_IS_t", "C_IR_r", "C_IR_p", "C_IR_t"};
}

namespace {

std::vector<std::string> record_cells(const Record& r) {
  std::vector<std::string> c{r.state, format_fixed(r.r_c), format_fixed(r.measures ? r.measures->state.omega : 0.0),
                             format_fixed(r.b)};
  if (!r.ok() || !r.measures || !r.report) {
    c[2] = "";
    c.resize(record_columns().size());
    return c;
  }
  const MeasureSet& m = *r.measures;
  const ComplexityReport& rep = *r.report;
  auto add = [&c](double v) { c.push_back(format_fixed(v)); };
  auto add3 = [&add](const Triple& t) {
    add(t.r);
    add(t.p);
    add(t.t);
  };
  add(m.alpha);
  add(m.beta);
  add(m.energy);
  add3(m.shannon);
  add3(m.renyi);
  add3(m.onicescu);
  add3(m.fisher);
  add(m.moments.r2);
  add(m.moments.rm2);
  add(m.moments.p2);
  add(m.moments.pm2);
  add(m.parseval);
  add3(rep.es);
  add3(rep.er);
  add3(rep.is);
  add3(rep.ir);
  return c;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += v[i];
  }
  return s;
}

}  // namespace

void write_records(std::ostream& os, const std::vector<Record>& recs, OutputFormat fmt) {
  const auto cols = record_columns();
  switch (fmt) {
    case OutputFormat::csv:
      os << join(cols, ",") << '\n';
      for (const auto& r : recs) os << join(record_cells(r), ",") << '\n';
      break;
    case OutputFormat::plot_data:
      os << "# " << join(cols, " ") << '\n';
      for (const auto& r : recs) {
        if (!r.ok()) continue;
        os << join(record_cells(r), " ") << '\n';
      }
      break;
    case OutputFormat::pretty:
      for (const auto& r : recs) {
        os << r.state << "  r_c = " << format_fixed(r.r_c) << "  b = " << format_fixed(r.b) << '\n';
        if (!r.ok()) {
          os << "  error: " << r.error << "\n\n";
          continue;
        }
        const auto cells = record_cells(r);
        for (std::size_t i = 4; i < cols.size(); ++i) {
          os << "  " << std::left << std::setw(10) << cols[i] << std::right << std::setw(22) << cells[i]
             << '\n';
        }
        os << '\n';
      }
      break;
  }
  for (const auto& r : recs) {
    if (!r.ok()) os << "# error " << r.state << " r_c=" << format_fixed(r.r_c) << ": " << r.error << '\n';
  }
}

int verify_records(std::istream& in, std::ostream& log, double rel_tol) {
  std::string line;
  std::vector<std::string> header;
  int bad = 0;
  int lineno = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = split(line);
      continue;
    }
    const auto cells = split(line);
    std::map<std::string, double> v;
    bool complete = true;
    for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) {
      if (cells[i].empty()) {
        complete = false;
        continue;
      }
      char* end = nullptr;
      const double x = std::strtod(cells[i].c_str(), &end);
      if (end && *end == '\0') v[header[i]] = x;
    }
    if (!complete) continue;  // failed point, nothing to check
    auto check = [&](const std::string& what, double lhs, double rhs, double scale) {
      if (std::fabs(lhs - rhs) > rel_tol * std::max(scale, 1e-300)) {
        ++bad;
        log << "line " << lineno << ": " << what << " mismatch " << lhs << " vs " << rhs << '\n';
      }
    };
    auto sum = [&](const std::string& x) {
      const double a = v[x + "_r"], b = v[x + "_p"], t = v[x + "_t"];
      check(x + "_t = " + x + "_r + " + x + "_p", t, a + b, std::max({std::fabs(a), std::fabs(b), std::fabs(t)}));
    };
    auto prod = [&](const std::string& x) {
      const double a = v[x + "_r"], b = v[x + "_p"], t = v[x + "_t"];
      check(x + "_t = " + x + "_r * " + x + "_p", t, a * b, std::fabs(t));
    };
    sum("S");
    sum("R");
    for (const char* x : {"E", "I", "C_ES", "C_ER", "C_IS", "C_IR"}) prod(x);
  }
  return bad;
}

// ---------------------------------------------------------------- golden tables

ComplexityKind parse_complexity_kind(const std::string& s) {
  if (s == "C_ES") return ComplexityKind::es;
  if (s == "C_ER") return ComplexityKind::er;
  if (s == "C_IS") return ComplexityKind::is;
  if (s == "C_IR") return ComplexityKind::ir;
  throw DomainError("unknown complexity '" + s + "'");
}

std::string to_string(ComplexityKind k) {
  switch (k) {
    case ComplexityKind::es: return "C_ES";
    case ComplexityKind::er: return "C_ER";
    case ComplexityKind::is: return "C_IS";
    case ComplexityKind::ir: return "C_IR";
  }
  return "";
}

const Triple& pick(const ComplexityReport& rep, ComplexityKind k) {
  switch (k) {
    case ComplexityKind::es: return rep.es;
    case ComplexityKind::er: return rep.er;
    case ComplexityKind::is: return rep.is;
    case ComplexityKind::ir: return rep.ir;
  }
  return rep.es;
}

fs::path default_data_dir() {
  if (const char* env = std::getenv("CHO_DATA_DIR"); env && *env) return env;
#ifdef CHO_DATA_DIR
  return CHO_DATA_DIR;
#else
  return "data";
#endif
}

namespace {

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

double parse_b(const std::string& s) {
  if (auto slash = s.find('/'); slash != std::string::npos) {
    return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
  }
  return std::stod(s);
}

}  // namespace

GoldenTable load_golden(const std::string& id, const fs::path& dir) {
  const fs::path path = dir / "golden" / ("table_" + id + ".csv");
  std::ifstream in(path);
  if (!in) throw Error("golden table file not found: " + path.string());
  GoldenTable g;
  g.id = id;
  bool have_kind = false, have_b = false, have_header = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = trim(line.substr(1, colon - 1));
      const std::string val = trim(line.substr(colon + 1));
      if (key == "source") g.source = val;
      if (key == "measure") {
        g.kind = parse_complexity_kind(val);
        have_kind = true;
      }
      if (key == "b") {
        g.b = parse_b(val);
        have_b = true;
      }
      continue;
    }
    if (!have_header) {
      if (line != "state,r_c,r,p,t") throw Error(path.string() + ": unexpected header '" + line + "'");
      have_header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) cells.push_back(trim(item));
    if (cells.size() != 5) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": expected 5 columns");
    }
    GoldenRow row;
    try {
      row.state = cells[0];
      row.r_c = std::stod(cells[1]);
      row.r = std::stod(cells[2]);
      row.p = std::stod(cells[3]);
      row.t = std::stod(cells[4]);
    } catch (const std::exception&) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": malformed number");
    }
    row.r_text = cells[2];
    row.p_text = cells[3];
    row.t_text = cells[4];
    g.rows.push_back(std::move(row));
  }
  if (!have_kind || !have_b) throw Error(path.string() + ": missing '# measure:' or '# b:' header");
  return g;
}

TableLayout table_layout(const std::string& id) {
  static const std::vector<double> grid{0.1, 0.2, 0.5, 0.8, 1.0, 2.5, 5.0, 7.0};
  static const std::map<std::string, std::pair<ComplexityKind, double>> kinds{
      {"I", {ComplexityKind::es, 2.0 / 3.0}},
      {"II", {ComplexityKind::er, 2.0 / 3.0}},
      {"III", {ComplexityKind::is, 1.0}},
      {"IV", {ComplexityKind::ir, 1.0}},
  };
  std::string base = id;
  bool supplementary = false;
  if (id.size() == 2 && id[0] == 'S' && id[1] >= '1' && id[1] <= '4') {
    static const char* roman[] = {"I", "II", "III", "IV"};
    base = roman[id[1] - '1'];
    supplementary = true;
  }
  const auto it = kinds.find(base);
  if (it == kinds.end()) throw DomainError("unknown table '" + id + "' (I, II, III, IV, S1..S4)");
  TableLayout t{id, it->second.first, it->second.second, {}, grid, !supplementary};
  t.states = supplementary ? std::vector<std::string>{"2p", "2d", "1f", "1g"}
                           : std::vector<std::string>{"1s", "2s", "1p", "1d"};
  return t;
}

double Cell::rel_dev() const {
  if (!reference || !error.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::fabs(computed - *reference) / std::fabs(*reference);
}

std::vector<Cell> reproduce_table(const TableLayout& layout, const GoldenTable* golden,
                                  const RunConfig& cfg, EigenvalueCache* cache) {
  std::vector<std::string> states = layout.states;
  std::vector<double> rcs = layout.rc_values;
  if (golden) {
    states.clear();
    rcs.clear();
    for (const auto& row : golden->rows) {
      if (std::find(states.begin(), states.end(), row.state) == states.end()) states.push_back(row.state);
      if (std::find(rcs.begin(), rcs.end(), row.r_c) == rcs.end()) rcs.push_back(row.r_c);
    }
    std::sort(rcs.begin(), rcs.end());
  }
  const auto points = compute_points(states, rcs, cfg, cache);
  auto find_point = [&](const std::string& s, double rc) -> const PointResult& {
    for (const auto& p : points) {
      if (p.state == s && p.r_c == rc) return p;
    }
    throw Error("internal: missing point");
  };

  std::vector<Cell> cells;
  auto emit = [&](const std::string& s, double rc, const GoldenRow* row) {
    const PointResult& pt = find_point(s, rc);
    std::string err = pt.error;
    Triple val{};
    if (err.empty()) {
      try {
        val = pick(complexity_report(*pt.measures, layout.b), layout.kind);
      } catch (const std::exception& e) {
        err = e.what();
      }
    }
    const double comp[3] = {val.r, val.p, val.t};
    const char colname[3] = {'r', 'p', 't'};
    for (int c = 0; c < 3; ++c) {
      Cell cell;
      cell.state = s;
      cell.r_c = rc;
      cell.column = colname[c];
      cell.computed = comp[c];
      cell.error = err;
      if (row) {
        cell.reference = c == 0 ? row->r : c == 1 ? row->p : row->t;
        cell.reference_text = c == 0 ? row->r_text : c == 1 ? row->p_text : row->t_text;
      }
      cells.push_back(std::move(cell));
    }
  };
  if (golden) {
    for (const auto& row : golden->rows) emit(row.state, row.r_c, &row);
  } else {
    for (const auto& s : states) {
      for (double rc : rcs) emit(s, rc, nullptr);
    }
  }
  return cells;
}

// ---------------------------------------------------------------- scan

CurveShape curve_shape(const std::vector<double>& y) {
  CurveShape s;
  if (y.empty()) return s;
  s.argmin = static_cast<std::size_t>(std::min_element(y.begin(), y.end()) - y.begin());
  s.argmax = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  s.interior_min = s.argmin > 0 && s.argmin + 1 < y.size();
  s.interior_max = s.argmax > 0 && s.argmax + 1 < y.size();
  return s;
}

namespace {

struct Series {
  std::string file_stem;
  std::string label;
  std::function<double(const MeasureSet&)> get;
};

std::string b_tag(double b) {
  if (std::fabs(b - 2.0 / 3.0) < 1e-4) return "C1";
  if (std::fabs(b - 1.0) < 1e-12) return "C2";
  return "Cb" + format_fixed(b, 6);
}

std::vector<Series> scan_series(const std::vector<double>& b_values) {
  std::vector<Series> out;
  const char* spaces[] = {"r", "p", "t"};
  auto comp = [](const Triple& t, int s) { return s == 0 ? t.r : s == 1 ? t.p : t.t; };
  const std::pair<const char*, Triple MeasureSet::*> base[] = {
      {"S", &MeasureSet::shannon}, {"R", &MeasureSet::renyi}, {"E", &MeasureSet::onicescu}, {"I", &MeasureSet::fisher}};
  for (const auto& [name, member] : base) {
    for (int s = 0; s < 3; ++s) {
      out.push_back({std::string(name) + "_" + spaces[s], std::string(name) + "_" + spaces[s],
                     [member = member, s, comp](const MeasureSet& m) { return comp(m.*member, s); }});
    }
  }
  const std::pair<ComplexityKind, const char*> kinds[] = {
      {ComplexityKind::es, "ES"}, {ComplexityKind::er, "ER"}, {ComplexityKind::is, "IS"}, {ComplexityKind::ir, "IR"}};
  for (double b : b_values) {
    for (const auto& [k, nm] : kinds) {
      for (int s = 0; s < 3; ++s) {
        const std::string pair = std::string{nm[0]} + spaces[s] + nm[1] + spaces[s];
        out.push_back({b_tag(b) + "_" + pair, "C^(b=" + format_fixed(b, 6) + ")_" + pair,
                       [b = b, k = k, s, comp](const MeasureSet& m) { return comp(pick(complexity_report(m, b), k), s); }});
      }
    }
  }
  return out;
}

void write_footer(std::ostream& os, const std::string& state, const std::vector<double>& rc,
                  const std::vector<double>& y) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (std::isfinite(y[i])) {
      xs.push_back(rc[i]);
      ys.push_back(y[i]);
    }
  }
  if (ys.empty()) {
    os << "# " << state << ": no data\n";
    return;
  }
  const CurveShape s = curve_shape(ys);
  os << "# " << state << ": min " << format_fixed(ys[s.argmin]) << " at r_c=" << format_fixed(xs[s.argmin])
     << (s.interior_min ? " (interior)" : " (endpoint)") << ", max " << format_fixed(ys[s.argmax])
     << " at r_c=" << format_fixed(xs[s.argmax]) << (s.interior_max ? " (interior)" : " (endpoint)") << '\n';
}

}  // namespace

ScanOutput run_scan(const RunConfig& cfg, const fs::path& dir, EigenvalueCache* cache, std::ostream& log) {
  fs::create_directories(dir);
  std::vector<double> rcs = cfg.rc_values;
  std::sort(rcs.begin(), rcs.end());
  const auto points = compute_points(cfg.states, rcs, cfg, cache);
  ScanOutput out;
  for (const auto& p : points) {
    if (!p.error.empty()) {
      ++out.failed_points;
      log << "warning: " << p.state << " r_c=" << format_fixed(p.r_c) << ": " << p.error << '\n';
    }
  }
  const std::size_t nrc = rcs.size();
  auto curve = [&](std::size_t si, const std::function<double(const MeasureSet&)>& get) {
    std::vector<double> y(nrc, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t j = 0; j < nrc; ++j) {
      const auto& p = points[si * nrc + j];
      if (!p.measures) continue;
      try {
        y[j] = get(*p.measures);
      } catch (const std::exception&) {
      }
    }
    return y;
  };
  auto cell = [](double v) { return std::isfinite(v) ? format_fixed(v) : std::string(); };

  for (const auto& series : scan_series(cfg.b_values)) {
    const fs::path path = dir / (series.file_stem + ".csv");
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path.string());
    os << "state,r_c,value\n";
    std::vector<std::vector<double>> curves;
    for (std::size_t si = 0; si < cfg.states.size(); ++si) {
      curves.push_back(curve(si, series.get));
      for (std::size_t j = 0; j < nrc; ++j) {
        os << cfg.states[si] << ',' << format_fixed(rcs[j]) << ',' << cell(curves.back()[j]) << '\n';
      }
    }
    os << "# " << series.label << " min/max per state\n";
    for (std::size_t si = 0; si < cfg.states.size(); ++si) write_footer(os, cfg.states[si], rcs, curves[si]);
    out.files.push_back(path);
  }

  // Figure panels: row A at b = 2/3, row B at b = 1; column (a) r-space, (b) p-space.
  const std::pair<ComplexityKind, const char*> figs[] = {
      {ComplexityKind::es, "ES"}, {ComplexityKind::er, "ER"}, {ComplexityKind::is, "IS"}, {ComplexityKind::ir, "IR"}};
  for (int f = 0; f < 4; ++f) {
    for (const char row : {'A', 'B'}) {
      for (const char col : {'a', 'b'}) {
        const double b = row == 'A' ? 2.0 / 3.0 : 1.0;
        const int s = col == 'a' ? 0 : 1;
        const ComplexityKind k = figs[f].first;
        const char* nm = figs[f].second;
        const char sp = s == 0 ? 'r' : 'p';
        const fs::path path =
            dir / ("fig" + std::to_string(f + 1) + "_" + row + "_" + col + ".dat");
        std::ofstream os(path);
        if (!os) throw Error("cannot write " + path.string());
        os << "# panel " << row << '(' << col << ") of figure " << f + 1 << ": C^(" << (row == 'A' ? 1 : 2) << ")_{"
           << nm[0] << '_' << sp << ' ' << nm[1] << '_' << sp << "}\n";
        os << "# r_c";
        for (const auto& st : cfg.states) os << ' ' << st;
        os << '\n';
        std::vector<std::vector<double>> curves;
        for (std::size_t si = 0; si < cfg.states.size(); ++si) {
          curves.push_back(curve(si, [b, k, s](const MeasureSet& m) {
            const Triple& t = pick(complexity_report(m, b), k);
            return s == 0 ? t.r : t.p;
          }));
        }
        for (std::size_t j = 0; j < nrc; ++j) {
          os << format_fixed(rcs[j]);
          for (const auto& c : curves) os << ' ' << (std::isfinite(c[j]) ? format_fixed(c[j]) : "nan");
          os << '\n';
        }
        for (std::size_t si = 0; si < cfg.states.size(); ++si) write_footer(os, cfg.states[si], rcs, curves[si]);
        out.files.push_back(path);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- command line

namespace {

struct CommonFlags {
  std::string config, states, rc, rc_range, b, format, out, cache;
  double omega = 0.0, alpha = 0.0, beta = 0.0;
  int jobs = 0;
  bool no_cache = false;
  std::map<std::string, CLI::Option*> opts;
};

void add_common(CLI::App* app, CommonFlags& f) {
  f.opts["config"] = app->add_option("--config", f.config, "flat key = value configuration file");
  f.opts["states"] = app->add_option("--states", f.states, "comma separated state labels (1s,2p,...)");
  f.opts["rc"] = app->add_option("--rc", f.rc, "comma separated confinement radii");
  f.opts["rc_range"] = app->add_option("--rc-range", f.rc_range, "start:stop:step");
  f.opts["omega"] = app->add_option("--omega", f.omega, "oscillator frequency");
  f.opts["b"] = app->add_option("--b", f.b, "comma separated b values (fractions allowed)");
  f.opts["alpha"] = app->add_option("--alpha", f.alpha, "position-space Renyi order");
  f.opts["beta"] = app->add_option("--beta", f.beta, "momentum-space Renyi order");
  f.opts["out"] = app->add_option("--out", f.out, "output file (directory for scan)");
  f.opts["format"] = app->add_option("--format", f.format, "csv | pretty | plot-data");
  f.opts["jobs"] = app->add_option("--jobs", f.jobs, "worker threads");
  f.opts["cache"] = app->add_option("--cache", f.cache, "eigenvalue cache file");
  app->add_flag("--no-cache", f.no_cache, "do not read or write the eigenvalue cache");
}

RunConfig build_config(const CommonFlags& f, RunConfig cfg) {
  auto given = [&f](const char* k) { return f.opts.at(k)->count() > 0; };
  if (given("config")) apply_config_file(f.config, cfg);
  if (given("states")) cfg.states = parse_name_list(f.states);
  if (given("rc")) cfg.rc_values = parse_real_list(f.rc);
  if (given("rc_range")) cfg.rc_values = parse_rc_range(f.rc_range);
  if (given("omega")) cfg.omega = f.omega;
  if (given("b")) cfg.b_values = parse_b_list(f.b);
  if (given("alpha")) cfg.alpha = f.alpha;
  if (given("beta")) cfg.beta = f.beta;
  if (given("out")) cfg.out = f.out;
  if (given("format")) cfg.format = parse_format(f.format);
  if (given("jobs")) cfg.jobs = f.jobs;
  if (given("cache")) cfg.cache_path = f.cache;
  if (f.no_cache) cfg.use_cache = false;
  return cfg;
}

class OutputSink {
 public:
  OutputSink(const fs::path& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error("cannot write " + path.string());
      os_ = &file_;
    }
  }
  std::ostream& get() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

std::unique_ptr<EigenvalueCache> open_cache(const RunConfig& cfg) {
  if (!cfg.use_cache || cfg.cache_path.empty()) return std::make_unique<EigenvalueCache>();
  return std::make_unique<EigenvalueCache>(cfg.cache_path);
}

void persist(const RunConfig& cfg, const EigenvalueCache& cache) {
  if (cfg.use_cache && !cfg.cache_path.empty()) cache.save();
}

void apply_jobs(const RunConfig& cfg) {
  if (cfg.jobs > 0) kernels::set_threads(cfg.jobs);
}

int cmd_compute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  apply_jobs(cfg);
  auto cache = open_cache(cfg);
  const auto recs = compute_records(cfg, cache.get());
  OutputSink sink(cfg.out, out);
  write_records(sink.get(), recs, cfg.format);
  persist(cfg, *cache);
  const bool failed = std::any_of(recs.begin(), recs.end(), [](const Record& r) { return !r.ok(); });
  if (failed) err << "some points failed; see '# error' lines\n";
  return failed ? exit_code::numerical : exit_code::ok;
}

int cmd_table(const std::string& id, const fs::path& data_dir, double threshold, const RunConfig& cfg,
              std::ostream& out, std::ostream& err) {
  apply_jobs(cfg);
  const TableLayout layout = table_layout(id);
  std::optional<GoldenTable> golden;
  if (layout.has_reference) {
    try {
      golden = load_golden(id, data_dir);
    } catch (const DomainError&) {
      throw;
    } catch (const Error& e) {
      throw DomainError(e.what());
    }
  }
  auto cache = open_cache(cfg);
  const auto cells = reproduce_table(layout, golden ? &*golden : nullptr, cfg, cache.get());
  persist(cfg, *cache);

  OutputSink sink(cfg.out, out);
  std::ostream& os = sink.get();
  int failed = 0, errors = 0, n_ref = 0;
  double worst = 0.0;
  const bool csv = cfg.format != OutputFormat::pretty;
  os << "# table " << id << ": " << to_string(layout.kind) << ", b = " << format_fixed(layout.b)
     << (layout.has_reference ? "" : ", no reference") << '\n';
  if (csv) {
    os << "state,r_c,column,computed,reference,rel_dev,status\n";
  } else {
    os << std::left << std::setw(6) << "state" << std::setw(6) << "r_c" << std::setw(4) << "col" << std::right
       << std::setw(20) << "computed" << std::setw(20) << "reference" << std::setw(12) << "rel_dev" << "  status\n";
  }
  for (const auto& c : cells) {
    std::string status;
    std::string dev;
    if (!c.error.empty()) {
      status = "error";
      ++errors;
    } else if (!c.reference) {
      status = "no reference";
    } else {
      ++n_ref;
      const double d = c.rel_dev();
      worst = std::max(worst, d);
      dev = format_sci(d);
      status = d <= threshold ? "ok" : "FAIL";
      if (d > threshold) ++failed;
    }
    const std::string comp = c.error.empty() ? format_fixed(c.computed) : "";
    const std::string ref = c.reference ? c.reference_text : "";
    if (csv) {
      os << c.state << ',' << format_fixed(c.r_c, 3) << ',' << c.column << ',' << comp << ',' << ref << ',' << dev
         << ',' << status << '\n';
    } else {
      os << std::left << std::setw(6) << c.state << std::setw(6) << format_fixed(c.r_c, 2) << std::setw(4)
         << c.column << std::right << std::setw(20) << comp << std::setw(20) << ref << std::setw(12) << dev << "  "
         << status << '\n';
    }
    if (!c.error.empty()) os << "# error " << c.state << " r_c=" << format_fixed(c.r_c) << ": " << c.error << '\n';
  }
  if (layout.has_reference) {
    os << "# cells " << n_ref << ", beyond " << format_sci(threshold) << ": " << failed << ", max rel_dev "
       << format_sci(worst) << '\n';
  }
  if (errors) {
    err << errors << " cells failed to compute\n";
    return exit_code::numerical;
  }
  if (failed) {
    err << failed << " cells outside tolerance " << format_sci(threshold) << '\n';
    return exit_code::tolerance;
  }
  return exit_code::ok;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Information measures of the confined isotropic harmonic oscillator"};
  app.require_subcommand(1);

  CommonFlags compute_flags, scan_flags, table_flags;
  auto* compute = app.add_subcommand("compute", "all measures and complexities at chosen points");
  add_common(compute, compute_flags);

  auto* scan = app.add_subcommand("scan", "r_c scan; per-measure CSV and figure plot-data files");
  add_common(scan, scan_flags);

  auto* table = app.add_subcommand("table", "recompute a reference table and compare");
  add_common(table, table_flags);
  std::string table_id;
  std::string data_dir;
  double threshold = 5e-4;
  table->add_option("which", table_id, "I, II, III, IV, S1, S2, S3, S4")->required();
  table->add_option("--data-dir", data_dir, "directory holding golden/table_*.csv");
  table->add_option("--threshold", threshold, "relative deviation tolerance");

  auto* cache_cmd = app.add_subcommand("cache", "inspect or clear the eigenvalue cache");
  std::string cache_action;
  std::string cache_path = "cho_eigen_cache.txt";
  cache_cmd->add_option("action", cache_action, "inspect | clear")->required()->check(CLI::IsMember({"inspect", "clear"}));
  cache_cmd->add_option("--cache", cache_path, "eigenvalue cache file");

  auto* verify = app.add_subcommand("verify", "check total identities in a compute CSV");
  std::string verify_path;
  verify->add_option("file", verify_path, "CSV written by compute")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return exit_code::ok;
    }
    err << "usage error: " << e.what() << '\n' << app.help();
    return exit_code::usage;
  }

  try {
    if (*compute) {
      return cmd_compute(build_config(compute_flags, RunConfig{}), out, err);
    }
    if (*scan) {
      RunConfig defaults;
      defaults.states = default_state_names();
      defaults.rc_values = default_scan_grid();
      RunConfig cfg = build_config(scan_flags, defaults);
      cfg.validate();
      apply_jobs(cfg);
      auto cache = open_cache(cfg);
      const fs::path dir = cfg.out.empty() ? fs::path("scan") : cfg.out;
      const ScanOutput res = run_scan(cfg, dir, cache.get(), err);
      persist(cfg, *cache);
      out << "wrote " << res.files.size() << " files to " << dir.string() << '\n';
      return res.failed_points ? exit_code::numerical : exit_code::ok;
    }
    if (*table) {
      RunConfig cfg = build_config(table_flags, RunConfig{});
      cfg.tolerances.validate();
      return cmd_table(table_id, data_dir.empty() ? default_data_dir() : fs::path(data_dir), threshold, cfg, out,
                       err);
    }
    if (*cache_cmd) {
      EigenvalueCache cache(cache_path);
      if (cache_action == "clear") {
        const std::size_t n = cache.size();
        cache.clear();
        cache.save();
        out << "cleared " << n << " entries from " << cache_path << '\n';
      } else {
        out << "# cache " << cache_path << ": " << cache.size() << " entries\n";
        std::ifstream in(cache_path);
        std::string line;
        while (std::getline(in, line)) out << line << '\n';
      }
      return exit_code::ok;
    }
    if (*verify) {
      std::ifstream in(verify_path);
      if (!in) throw Error("cannot open " + verify_path);
      const int bad = verify_records(in, err);
      out << (bad ? "identity violations: " + std::to_string(bad) : std::string("all identities hold")) << '\n';
      return bad ? exit_code::numerical : exit_code::ok;
    }
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::numerical;
  }
  return exit_code::usage;
}

}  // namespace cho
