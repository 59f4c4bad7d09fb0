#include "genvi/harness/cli.hpp"

#include <CLI11.hpp>

#include <ostream>
#include <string>
#include <vector>

#include "genvi/harness/checks.hpp"
#include "genvi/harness/config.hpp"
#include "genvi/harness/csv.hpp"
#include "genvi/harness/experiments.hpp"
#include "genvi/harness/svg.hpp"

namespace genvi::harness {

namespace {

// Splices `--key=value` pairs from a --config file right after the
// subcommand name, so anything given on the command line (later) wins.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::size_t sub = 1;
  while (sub < args.size() && !args[sub].empty() && args[sub][0] == '-') ++sub;
  if (sub >= args.size()) return args;
  std::string path;
  for (std::size_t i = sub + 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::vector<std::string> out(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(sub + 1));
  for (const auto& [k, v] : read_key_value_file(path)) {
    if (k == "config") throw ConfigError("config files cannot include other config files");
    out.push_back("--" + k + "=" + v);
  }
  out.insert(out.end(), args.begin() + static_cast<std::ptrdiff_t>(sub + 1), args.end());
  return out;
}

void write_outputs(const CsvTable& table, const std::string& path, bool log_y, const std::string& title,
                   std::ostream& out) {
  const std::string text = to_csv(table);
  write_text_file(path, text);
  // the plot is derived from the CSV text alone
  SvgOptions opt;
  opt.log_y = log_y;
  opt.title = title;
  const std::string svg = svg_path_for(path);
  write_text_file(svg, render_svg(parse_csv(text), opt));
  out << "wrote " << table.rows.size() << " rows to " << path << " and " << svg << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"genvi: variational integrators from generating functions"};
  // -h would collide with the fpu step size option
  app.set_help_flag("--help", "print this help message and exit");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  std::string config_path;

  ResonanceConfig rc;
  auto* res = app.add_subcommand("resonance", "energy error against step size for the perturbed oscillator");
  res->add_option("--config", config_path, "key=value file; command-line flags take precedence");
  res->add_option("--eps", rc.eps, "perturbation strength")->capture_default_str();
  res->add_option("--h-min", rc.h_min)->capture_default_str();
  res->add_option("--h-max", rc.h_max)->capture_default_str();
  res->add_option("--h-count", rc.h_count)->capture_default_str();
  res->add_option("--t-final", rc.t_final)->capture_default_str();
  res->add_flag("--long", rc.long_run, "T = 10000");
  res->add_option("--threads", rc.threads, "worker threads (0: all cores)");
  res->add_option("--out", rc.out)->capture_default_str();

  FpuConfig fc;
  auto* fpu = app.add_subcommand("fpu", "oscillatory energy along an FPU trajectory");
  fpu->add_option("--config", config_path, "key=value file; command-line flags take precedence");
  fpu->add_option("--omega", fc.omega)->capture_default_str();
  fpu->add_option("--m", fc.m)->capture_default_str();
  fpu->add_option("--h", fc.h)->capture_default_str();
  fpu->add_option("--method", fc.method, "sv, htvi or imex")->capture_default_str();
  fpu->add_option("--t-final", fc.t_final)->capture_default_str();
  fpu->add_flag("--long", fc.long_run, "T = 1000");
  fpu->add_option("--stride", fc.stride, "write every n-th step")->capture_default_str();
  fpu->add_option("--out", fc.out)->capture_default_str();

  CheckConfig cc;
  auto* chk = app.add_subcommand("check", "run invariant checks");
  chk->add_option("--config", config_path, "key=value file; command-line flags take precedence");
  chk->add_option("--suite", cc.suite, "all, tables, order, adjoint, symmetry, symplectic, averaged, fpu")
      ->capture_default_str();
  chk->add_flag("--negative-control", cc.negative_control, "add a check that must fail");
  chk->add_option("--seed", cc.seed)->capture_default_str();

  OrderConfig oc;
  std::string h_list;
  auto* ord = app.add_subcommand("order", "global convergence order on the harmonic oscillator");
  ord->add_option("--config", config_path, "key=value file; command-line flags take precedence");
  ord->add_option("--method", oc.method)->capture_default_str();
  ord->add_option("--t-final", oc.t_final)->capture_default_str();
  ord->add_option("--h-list", h_list, "comma-separated step sizes");
  ord->add_option("--out", oc.out, "optional CSV output");

  auto* adj = app.add_subcommand("adjoint-demo", "adjoint and self-adjointness defects");
  adj->add_option("--config", config_path, "key=value file; command-line flags take precedence");

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = expand_config(args);
    std::vector<const char*> cargs;
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());

    if (res->parsed()) {
      const CsvTable t = run_resonance(rc);
      write_outputs(t, rc.out, true, "max energy error vs h, eps=" + format_number(rc.eps), out);
      return 0;
    }
    if (fpu->parsed()) {
      const CsvTable t = run_fpu(fc);
      write_outputs(t, fc.out, false, "FPU oscillatory energy, method " + fc.method, out);
      return 0;
    }
    if (chk->parsed()) {
      bool ok = true;
      for (const auto& line : run_check_suite(cc)) {
        out << format_check_line(line) << "\n";
        ok = ok && line.pass;
      }
      return ok ? 0 : 1;
    }
    if (ord->parsed()) {
      if (!h_list.empty()) oc.h_values = parse_double_list(h_list);
      const OrderReport r = run_order(oc);
      for (std::size_t i = 0; i < r.h.size(); ++i)
        out << "h=" << format_number(r.h[i]) << " error=" << format_number(r.errors[i]) << "\n";
      if (r.degenerate) out << "slope: degenerate (errors at roundoff level)\n";
      else out << "slope: " << format_number(r.slope) << "\n";
      if (!oc.out.empty()) write_text_file(oc.out, to_csv(order_table(r)));
      return 0;
    }
    if (adj->parsed()) {
      out << run_adjoint_demo();
      return 0;
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace genvi::harness
