#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "cho/cli.hpp"
#include "cho/config.hpp"
#include "cho/eigen_cache.hpp"
#include "cho/error.hpp"

using namespace cho;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "cho");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const char* name) {
  const fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  return p;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

// Column lookup in a compute CSV.
double field(const std::string& csv, int row, const std::string& col) {
  const auto lines = split(csv, '\n');
  const auto header = split(lines.at(0), ',');
  const auto cells = split(lines.at(static_cast<std::size_t>(row) + 1), ',');
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == col) return std::stod(cells.at(i));
  }
  throw std::runtime_error("no column " + col);
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("ranges") {
    const auto r = parse_rc_range("0.1:8.0:0.1");
    CHECK(r.size() == 80);
    CHECK(r.front() == 0.1);
    CHECK(r.back() == 8.0);
    CHECK(r[22] == 2.3);
    CHECK(parse_rc_range("2:2:0.5") == std::vector<double>{2.0});
    CHECK_THROWS_AS(parse_rc_range("1:2:0"), DomainError);
    CHECK_THROWS_AS(parse_rc_range("1:2"), DomainError);
    CHECK_THROWS_AS(parse_rc_range("3:2:1"), DomainError);
  }

  TEST_CASE("lists and fractions") {
    CHECK(parse_real_list("2/3, 1") == std::vector<double>{2.0 / 3.0, 1.0});
    CHECK(parse_b_list("0.6667,1,0.5") == std::vector<double>{2.0 / 3.0, 1.0, 0.5});
    CHECK(parse_b_list("0.667") == std::vector<double>{0.667});
    CHECK(parse_name_list("1s, 2p") == std::vector<std::string>{"1s", "2p"});
    CHECK_THROWS_AS(parse_real_list("1,x"), DomainError);
  }

  TEST_CASE("key = value file") {
    std::istringstream in(
        "# comment\n"
        "states = 1s,1d\n"
        "rc_range = 0.5:1.5:0.5   # trailing comment\n"
        "b = 2/3\n"
        "alpha = 0.7\n"
        "beta = 3.5\n"
        "rel_tol = 1e-9\n"
        "format = pretty\n"
        "jobs = 2\n");
    RunConfig cfg;
    apply_config(in, cfg);
    CHECK(cfg.states == std::vector<std::string>{"1s", "1d"});
    CHECK(cfg.rc_values == std::vector<double>{0.5, 1.0, 1.5});
    CHECK(cfg.b_values.size() == 1);
    CHECK(cfg.alpha == 0.7);
    CHECK(cfg.beta == 3.5);
    CHECK(cfg.tolerances.rel_tol == 1e-9);
    CHECK(cfg.format == OutputFormat::pretty);
    CHECK(cfg.jobs == 2);
    CHECK_NOTHROW(cfg.validate());
  }

  TEST_CASE("bad file lines name the line") {
    std::istringstream in("states = 1s\nbogus = 1\n");
    RunConfig cfg;
    try {
      apply_config(in, cfg, "x.cfg");
      FAIL("expected DomainError");
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("x.cfg:2") != std::string::npos);
    }
  }

  TEST_CASE("validation") {
    RunConfig cfg;
    CHECK_THROWS_AS(cfg.validate(), DomainError);  // no r_c
    cfg.rc_values = {1.0};
    CHECK_NOTHROW(cfg.validate());
    cfg.states = {"9z"};
    CHECK_THROWS_AS(cfg.validate(), DomainError);
  }
}

TEST_SUITE("formatting") {
  TEST_CASE("ten significant digits") {
    CHECK(format_fixed(0.54221877571234) == "0.5422187757");
    CHECK(format_fixed(149.73308834) == "149.7330883");
    CHECK(format_fixed(807108.18364) == "807108.1836");
    CHECK(format_fixed(0.0) == "0");
    CHECK(format_fixed(-6.2321732181) == "-6.232173218");
    CHECK(format_sci(1.234e-5) == "1.234e-05");
  }
}

TEST_SUITE("compute") {
  TEST_CASE("published points") {
    const auto a = run({"compute", "--states", "1s", "--rc", "7.0", "--b", "0.6667", "--no-cache"});
    REQUIRE(a.code == 0);
    CHECK(std::fabs(field(a.out, 0, "C_ES_r") - 0.5422182865) < 5e-7);
    CHECK(split(split(a.out, '\n')[1], ',')[3] == "0.6666666667");
    const auto b = run({"compute", "--states", "1s", "--rc", "7.0", "--b", "2/3", "--no-cache"});
    CHECK(std::fabs(field(b.out, 0, "C_ES_r") - 0.5422182865) < 5e-7);
    const auto c = run({"compute", "--states", "1s", "--rc", "10", "--b", "1", "--no-cache"});
    CHECK(std::fabs(field(c.out, 0, "C_IS_r") - 149.7331) < 1e-3);
  }

  TEST_CASE("empty r_c list is a usage error with no output") {
    const auto r = run({"compute", "--states", "1s", "--no-cache"});
    CHECK(r.code == exit_code::usage);
    CHECK(r.out.empty());
  }

  TEST_CASE("unknown flag and unknown state") {
    CHECK(run({"compute", "--bogus"}).code == exit_code::usage);
    CHECK(run({"compute", "--states", "7q", "--rc", "1", "--no-cache"}).code == exit_code::usage);
    CHECK(run({}).code == exit_code::usage);
  }

  TEST_CASE("ordering: state, r_c ascending, b") {
    const auto r = run({"compute", "--states", "1p,1s", "--rc", "2,1", "--b", "1,2/3", "--no-cache"});
    REQUIRE(r.code == 0);
    const auto lines = split(r.out, '\n');
    REQUIRE(lines.size() == 9);
    CHECK(lines[1].rfind("1p,1.000000000,", 0) == 0);
    CHECK(lines[2].rfind("1p,1.000000000,", 0) == 0);
    CHECK(lines[3].rfind("1p,2.000000000,", 0) == 0);
    CHECK(lines[5].rfind("1s,1.000000000,", 0) == 0);
    CHECK(split(lines[1], ',')[3] == "1.000000000");
    CHECK(split(lines[2], ',')[3] == "0.6666666667");
  }

  TEST_CASE("deterministic bytes regardless of jobs and cache state") {
    const fs::path cache = scratch("cho_cli_cache.txt");
    const auto cold = run({"compute", "--states", "2s,1f", "--rc", "0.8,3", "--cache", cache.string(), "--jobs", "1"});
    REQUIRE(cold.code == 0);
    CHECK(fs::exists(cache));
    const auto warm = run({"compute", "--states", "2s,1f", "--rc", "0.8,3", "--cache", cache.string(), "--jobs", "3"});
    CHECK(cold.out == warm.out);
    const auto inspect = run({"cache", "inspect", "--cache", cache.string()});
    CHECK(inspect.out.find("4 entries") != std::string::npos);
    CHECK(run({"cache", "clear", "--cache", cache.string()}).code == 0);
    CHECK(EigenvalueCache(cache).size() == 0);
    fs::remove(cache);
  }

  TEST_CASE("config file with flag override") {
    const fs::path cfg = scratch("cho_cli.cfg");
    {
      std::ofstream o(cfg);
      o << "states = 1d\nrc = 1.5\nb = 1\nformat = pretty\n";
    }
    const auto r = run({"compute", "--config", cfg.string(), "--format", "csv", "--no-cache"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("state,r_c,", 0) == 0);
    CHECK(r.out.find("1d,1.500000000,") != std::string::npos);
    fs::remove(cfg);
  }

  TEST_CASE("pretty and plot-data formats") {
    const auto p = run({"compute", "--states", "1s", "--rc", "1", "--b", "1", "--format", "pretty", "--no-cache"});
    CHECK(p.out.find("C_IR_t") != std::string::npos);
    const auto d = run({"compute", "--states", "1s", "--rc", "1", "--b", "1", "--format", "plot-data", "--no-cache"});
    CHECK(d.out.rfind("# state r_c", 0) == 0);
  }

  TEST_CASE("verifier accepts compute output and flags tampering") {
    const fs::path csv = scratch("cho_cli_out.csv");
    REQUIRE(run({"compute", "--states", "1s,2p", "--rc", "0.4,4", "--out", csv.string(), "--no-cache"}).code == 0);
    CHECK(run({"verify", csv.string()}).code == 0);

    std::ifstream in(csv);
    std::stringstream buf;
    buf << in.rdbuf();
    std::istringstream ok(buf.str());
    std::ostringstream log;
    CHECK(verify_records(ok, log) == 0);

    auto lines = split(buf.str(), '\n');
    auto cells = split(lines[1], ',');
    cells[9] = "99.0";  // S_t
    std::string bad = lines[0] + "\n";
    for (std::size_t i = 0; i < cells.size(); ++i) bad += (i ? "," : "") + cells[i];
    bad += "\n";
    std::istringstream tampered(bad);
    CHECK(verify_records(tampered, log) == 1);
    fs::remove(csv);
  }
}

TEST_SUITE("table") {
  TEST_CASE("golden files load with their headers") {
    for (const char* id : {"I", "II", "III", "IV"}) {
      const auto g = load_golden(id, default_data_dir());
      CHECK(g.rows.size() == 32);
      CHECK(g.source.find(std::string("Table ") + id) == 0);
    }
    const auto g = load_golden("III", default_data_dir());
    CHECK(g.kind == ComplexityKind::is);
    CHECK(g.b == 1.0);
  }

  TEST_CASE("missing golden file is named") {
    try {
      load_golden("I", "/nonexistent");
      FAIL("expected Error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("/nonexistent/golden/table_I.csv") != std::string::npos);
    }
    const auto r = run({"table", "I", "--data-dir", "/nonexistent", "--no-cache"});
    CHECK(r.code == exit_code::usage);
    CHECK(r.err.find("table_I.csv") != std::string::npos);
  }

  TEST_CASE("table IV passes") {
    const auto r = run({"table", "IV", "--no-cache"});
    CHECK(r.code == exit_code::ok);
    CHECK(r.out.find("1p,1.00,r,") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
  }

  TEST_CASE("supplementary tables have no reference") {
    const auto r = run({"table", "S1", "--no-cache"});
    CHECK(r.code == exit_code::ok);
    CHECK(r.out.find("no reference") != std::string::npos);
    CHECK(r.out.find("2p,") != std::string::npos);
    CHECK(r.out.find("1g,") != std::string::npos);
  }

  TEST_CASE("tolerance failures give exit code 3") {
    const auto r = run({"table", "III", "--threshold", "1e-12", "--no-cache"});
    CHECK(r.code == exit_code::tolerance);
  }

  TEST_CASE("unknown table") { CHECK(run({"table", "V", "--no-cache"}).code == exit_code::usage); }
}

TEST_SUITE("scan") {
  TEST_CASE("curve shape") {
    const auto s = curve_shape({3.0, 1.0, 2.0, 5.0});
    CHECK(s.argmin == 1);
    CHECK(s.interior_min);
    CHECK(s.argmax == 3);
    CHECK_FALSE(s.interior_max);
  }

  TEST_CASE("files, layout and trend footers") {
    const fs::path dir = scratch("cho_scan");
    const auto r = run({"scan", "--states", "1s", "--rc-range", "0.1:7:0.1", "--out", dir.string(), "--no-cache"});
    REQUIRE(r.code == 0);
    for (const char* f : {"C1_EpSp.csv", "C2_IrSr.csv", "S_t.csv", "fig1_A_a.dat", "fig1_A_b.dat", "fig4_B_b.dat"}) {
      CHECK(fs::exists(dir / f));
    }
    // C^(1)_{EpSp} of 1s rises towards 0.5422; past r_c ~ 6 it is flat at
    // ten printed digits.
    std::ifstream in(dir / "C1_EpSp.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "state,r_c,value");
    std::vector<double> y;
    std::string footer;
    while (std::getline(in, line)) {
      if (line[0] == '#') {
        footer += line + "\n";
        continue;
      }
      y.push_back(std::stod(split(line, ',')[2]));
    }
    REQUIRE(y.size() == 70);
    for (std::size_t i = 1; i < y.size(); ++i) {
      if (i < 60) {
        CHECK(y[i] > y[i - 1]);
      } else {
        CHECK(y[i] >= y[i - 1]);
      }
    }
    CHECK(std::fabs(y.back() - 0.5422) < 1e-4);
    CHECK(footer.find("1s: min") != std::string::npos);
    fs::remove_all(dir);
  }

  TEST_CASE("zero-length range gives one point") {
    const fs::path dir = scratch("cho_scan_one");
    REQUIRE(run({"scan", "--states", "1s", "--rc-range", "2:2:0.1", "--out", dir.string(), "--no-cache"}).code == 0);
    std::ifstream in(dir / "C1_ErSr.csv");
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) rows += (line[0] != '#');
    CHECK(rows == 2);
    fs::remove_all(dir);
  }
}
