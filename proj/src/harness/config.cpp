#include "genvi/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "genvi/harness/csv.hpp"

namespace genvi::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

void ResonanceConfig::validate() const {
  require(std::isfinite(eps) && eps >= 0.0, "eps must be >= 0");
  require(h_count >= 1, "h grid must not be empty (h-count >= 1)");
  require(std::isfinite(h_min) && h_min > 0.0, "h-min must be > 0");
  require(std::isfinite(h_max) && h_max >= h_min, "h-max must be >= h-min");
  require(h_count == 1 || h_max > h_min, "h-max must exceed h-min when h-count > 1");
  require(std::isfinite(t_final) && t_final > 0.0, "t-final must be > 0");
  require(std::isfinite(overflow) && overflow > 0.0, "overflow substitute must be > 0");
  require(!out.empty(), "output path required");
}

std::vector<double> ResonanceConfig::grid() const {
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(h_count));
  if (h_count == 1) return {h_min};
  for (int i = 0; i < h_count; ++i) g.push_back(h_min + (h_max - h_min) * i / (h_count - 1));
  return g;
}

std::string ResonanceConfig::describe() const {
  std::ostringstream os;
  os << "experiment=resonance eps=" << format_number(eps) << " h_min=" << format_number(h_min)
     << " h_max=" << format_number(h_max) << " h_count=" << h_count << " t_final=" << format_number(horizon())
     << " overflow=" << format_number(overflow) << " q0=1 p0=0 singular_guard=0 avg_quadrature=gauss_legendre_4";
  return os.str();
}

const std::vector<std::string>& fpu_methods() {
  static const std::vector<std::string> m{"sv", "htvi", "imex"};
  return m;
}

void FpuConfig::validate() const {
  require(std::isfinite(omega) && omega > 0.0, "omega must be > 0");
  require(m >= 1, "m must be >= 1");
  require(std::isfinite(h) && h > 0.0, "h must be > 0");
  require(contains(fpu_methods(), method), "unknown method '" + method + "' (expected sv, htvi or imex)");
  require(std::isfinite(t_final) && t_final > 0.0, "t-final must be > 0");
  require(stride >= 1, "stride must be >= 1");
  require(!out.empty(), "output path required");
}

std::string FpuConfig::describe() const {
  std::ostringstream os;
  os << "experiment=fpu method=" << method << " omega=" << format_number(omega) << " m=" << m
     << " h=" << format_number(h) << " t_final=" << format_number(horizon()) << " stride=" << stride
     << " quartic=1 initial=stiff_spring_1";
  return os.str();
}

const std::vector<std::string>& check_suites() {
  static const std::vector<std::string> s{"all",       "tables",     "order",    "adjoint",
                                          "symmetry",  "symplectic", "averaged", "fpu"};
  return s;
}

void CheckConfig::validate() const {
  require(contains(check_suites(), suite), "unknown suite '" + suite + "'");
}

const std::vector<std::string>& order_methods() {
  static const std::vector<std::string> m{"euler_a",   "euler_b",  "stormer_verlet", "h_tvi_trapezoid",
                                          "sym_euler_a", "exact_dl", "exact_dh"};
  return m;
}

void OrderConfig::validate() const {
  require(contains(order_methods(), method), "unknown method '" + method + "'");
  require(std::isfinite(t_final) && t_final > 0.0, "t-final must be > 0");
  require(h_values.size() >= 3, "order study needs at least three step sizes");
  for (double h : h_values) {
    require(std::isfinite(h) && h > 0.0, "step sizes must be > 0");
    const double n = t_final / h;
    require(std::abs(n - std::round(n)) <= 1e-9 * n, "each step size must divide t-final");
  }
}

std::vector<std::pair<std::string, std::string>> read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    out.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + t + "'");
    }
    if (used != t.size()) throw ConfigError("not a number: '" + t + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace genvi::harness
