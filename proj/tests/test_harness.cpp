#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "genvi/harness/checks.hpp"
#include "genvi/harness/cli.hpp"
#include "genvi/harness/config.hpp"
#include "genvi/harness/csv.hpp"
#include "genvi/harness/experiments.hpp"
#include "genvi/harness/svg.hpp"

using namespace genvi::harness;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "genvi");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "genvi_harness_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(1e6) == "1000000");
  CHECK(format_number(-2.5e-12) == "-2.4999999999999998e-12");
  CHECK(std::stod(format_number(std::numbers::pi)) == std::numbers::pi);
}

TEST_CASE("csv round trip") {
  CsvTable t;
  t.columns = {"h", "err"};
  t.comment = "experiment=test seed=1";
  t.rows = {{0.1, 1e-3}, {0.2, std::numbers::pi}};
  const std::string text = to_csv(t);
  CHECK(text.rfind("h,err\n# experiment=test seed=1\n", 0) == 0);
  const CsvTable back = parse_csv(text);
  CHECK(back.columns == t.columns);
  CHECK(back.comment == t.comment);
  CHECK(back.rows == t.rows);
  CHECK(back.column_values("err")[1] == std::numbers::pi);
  CHECK_THROWS(back.column("missing"));
}

TEST_CASE("svg is a pure function of the csv") {
  CsvTable t;
  t.columns = {"h", "a", "b"};
  t.comment = "x";
  t.rows = {{0.1, 1e-3, 1e6}, {0.2, 1e-5, 1e-2}, {0.3, 1e-4, 1.0}};
  SvgOptions opt;
  opt.log_y = true;
  opt.title = "t";
  const std::string a = render_svg(t, opt);
  const std::string b = render_svg(parse_csv(to_csv(t)), opt);
  CHECK(a == b);
  CHECK(a.find("<svg") != std::string::npos);
  CHECK(a.find("</svg>") != std::string::npos);
  CHECK(svg_path_for("out/res.csv") == "out/res.svg");
  CHECK(svg_path_for("noext") == "noext.svg");
}

TEST_CASE("config parsing") {
  const auto path = scratch("cfg.txt");
  {
    std::ofstream f(path);
    f << "# comment\n\n eps = 0.25\nh-count=3\n";
  }
  const auto kv = read_key_value_file(path.string());
  REQUIRE(kv.size() == 2);
  CHECK(kv[0].first == "eps");
  CHECK(kv[0].second == "0.25");
  CHECK(parse_double_list("0.1, 0.05,0.025") == std::vector<double>{0.1, 0.05, 0.025});
  CHECK_THROWS_AS(parse_double_list("0.1,x"), ConfigError);
  CHECK_THROWS_AS(read_key_value_file("/nonexistent/genvi.cfg"), ConfigError);
  {
    std::ofstream f(scratch("bad.txt"));
    f << "novalue\n";
  }
  CHECK_THROWS_AS(read_key_value_file(scratch("bad.txt").string()), ConfigError);
}

TEST_CASE("config validation") {
  ResonanceConfig rc;
  CHECK_NOTHROW(rc.validate());
  CHECK(rc.grid().size() == 50);
  CHECK(rc.grid().front() == 0.1);
  CHECK(rc.grid().back() == 10.0);
  rc.h_count = 0;
  CHECK_THROWS_AS(rc.validate(), ConfigError);
  rc = {};
  rc.eps = -1.0;
  CHECK_THROWS_AS(rc.validate(), ConfigError);
  rc = {};
  rc.long_run = true;
  CHECK(rc.horizon() == 10000.0);

  FpuConfig fc;
  fc.method = "rk4";
  CHECK_THROWS_AS(fc.validate(), ConfigError);
  CheckConfig cc;
  cc.suite = "nope";
  CHECK_THROWS_AS(cc.validate(), ConfigError);
  OrderConfig oc;
  oc.method = "nope";
  CHECK_THROWS_AS(oc.validate(), ConfigError);
}

TEST_CASE("resonance with zero epsilon matches the exact methods") {
  ResonanceConfig rc;
  rc.eps = 0.0;
  rc.h_min = 0.2;
  rc.h_max = 1.3;
  rc.h_count = 6;
  rc.t_final = 50.0;
  const CsvTable t = run_resonance(rc);
  REQUIRE(t.rows.size() == 6);
  CHECK(t.columns == std::vector<std::string>{"h", "err_avgL", "err_avgH", "err_exactDL", "err_exactDH", "err_min"});
  for (const auto& row : t.rows) {
    CHECK(std::abs(row[1] - row[3]) <= 1e-10);
    CHECK(std::abs(row[2] - row[4]) <= 1e-10);
    CHECK(row[5] == std::min(row[1], row[2]));
  }
}

TEST_CASE("cli resonance writes csv and svg") {
  const auto out = scratch("res.csv");
  fs::remove(out);
  fs::remove(scratch("res.svg"));
  const auto r = cli({"resonance", "--eps", "0.1", "--h-min", "0.5", "--h-max", "1.0", "--h-count", "3",
                      "--t-final", "20", "--out", out.string()});
  CHECK(r.code == 0);
  REQUIRE(fs::exists(out));
  CHECK(fs::exists(scratch("res.svg")));
  const auto t = parse_csv(read_text_file(out.string()));
  CHECK(t.rows.size() == 3);
  CHECK(t.comment.find("eps=0.10000000000000001") != std::string::npos);
}

TEST_CASE("command line overrides the config file") {
  const auto cfg = scratch("res.cfg");
  {
    std::ofstream f(cfg);
    f << "# desk run\neps = 0.3\nh-count = 2\nh-min = 0.4\nh-max = 0.6\nt-final = 5\n";
  }
  const auto out = scratch("res_cfg.csv");
  auto r = cli({"resonance", "--config", cfg.string(), "--eps", "0.05", "--out", out.string()});
  CHECK(r.code == 0);
  auto t = parse_csv(read_text_file(out.string()));
  CHECK(t.rows.size() == 2);
  CHECK(t.comment.find("eps=0.050000000000000003") != std::string::npos);
  CHECK(t.comment.find("t_final=5") != std::string::npos);

  r = cli({"resonance", "--config", cfg.string(), "--out", out.string()});
  CHECK(r.code == 0);
  t = parse_csv(read_text_file(out.string()));
  CHECK(t.comment.find("eps=0.29999999999999999") != std::string::npos);
}

TEST_CASE("cli configuration errors exit with 2") {
  CHECK(cli({"resonance", "--h-count", "0", "--out", scratch("x.csv").string()}).code == 2);
  CHECK(cli({"fpu", "--method", "rk4", "--out", scratch("x.csv").string()}).code == 2);
  CHECK(cli({"order", "--method", "nope"}).code == 2);
  CHECK(cli({"check", "--suite", "nope"}).code == 2);
  CHECK(cli({"resonance", "--config", "/nonexistent/genvi.cfg"}).code == 2);
  CHECK(cli({"bogus"}).code == 2);
  CHECK(cli({}).code == 2);
  const auto r = cli({"fpu", "--method", "rk4"});
  CHECK(r.err.find("rk4") != std::string::npos);
}

TEST_CASE("cli fpu run") {
  const auto out = scratch("fpu.csv");
  const auto r = cli({"fpu", "--method", "imex", "--t-final", "1", "--stride", "10", "--out", out.string()});
  CHECK(r.code == 0);
  const auto t = parse_csv(read_text_file(out.string()));
  CHECK(t.columns == std::vector<std::string>{"t", "I1", "I2", "I3", "I_total", "H"});
  CHECK(t.rows.size() == 11);
  CHECK(t.rows.front()[0] == 0.0);
  CHECK(t.rows.back()[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.rows.front()[5] == doctest::Approx(2.00120008).epsilon(1e-12));
}

TEST_CASE("cli order and adjoint demo") {
  auto r = cli({"order", "--method", "euler_a"});
  CHECK(r.code == 0);
  CHECK(r.out.find("slope: ") != std::string::npos);
  r = cli({"order", "--method", "exact_dl"});
  CHECK(r.code == 0);
  CHECK(r.out.find("degenerate") != std::string::npos);
  r = cli({"order", "--method", "stormer_verlet", "--h-list", "0.1,0.05,0.025"});
  CHECK(r.code == 0);
  const auto report = run_order(OrderConfig{});
  CHECK(std::abs(report.slope - 2.0) <= 0.15);
  r = cli({"adjoint-demo"});
  CHECK(r.code == 0);
  CHECK_FALSE(r.out.empty());
}

TEST_CASE("check suite and negative control") {
  auto r = cli({"check", "--suite", "adjoint"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  r = cli({"check", "--suite", "adjoint", "--negative-control"});
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL control/") != std::string::npos);
}

TEST_CASE("check line formatting") {
  const auto pass = make_check("s", "n", 1e-12, Relation::at_most, 1e-9);
  CHECK(pass.pass);
  CHECK(format_check_line(pass).rfind("PASS s/n ", 0) == 0);
  const auto fail = make_check("s", "n", 1e-12, Relation::at_least, 1e-9);
  CHECK_FALSE(fail.pass);
  CHECK(format_check_line(fail).find(">=") != std::string::npos);
  const auto nan = make_check("s", "n", NAN, Relation::at_most, 1.0);
  CHECK_FALSE(nan.pass);
}

TEST_CASE("resonance output is deterministic") {
  ResonanceConfig rc;
  rc.h_min = 0.3;
  rc.h_max = 3.3;
  rc.h_count = 8;
  rc.t_final = 30.0;
  rc.threads = 1;
  const std::string a = to_csv(run_resonance(rc));
  rc.threads = 4;
  const std::string b = to_csv(run_resonance(rc));
  CHECK(a == b);
}

}
