#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace genvi::harness {

/// Invalid or inconsistent experiment parameters. Reported with exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ResonanceConfig {
  double eps = 0.1;
  double h_min = 0.1;
  double h_max = 10.0;
  int h_count = 50;
  double t_final = 1000.0;
  bool long_run = false;  ///< T = 10000
  double overflow = 1e6;
  unsigned threads = 0;
  std::string out = "resonance.csv";

  void validate() const;
  double horizon() const { return long_run ? 10000.0 : t_final; }
  /// h_count equally spaced values from h_min to h_max inclusive.
  std::vector<double> grid() const;
  std::string describe() const;
};

struct FpuConfig {
  double omega = 50.0;
  int m = 3;
  double h = 0.01;
  std::string method = "sv";
  double t_final = 200.0;
  bool long_run = false;  ///< T = 1000
  int stride = 10;
  std::string out = "fpu.csv";

  void validate() const;
  double horizon() const { return long_run ? 1000.0 : t_final; }
  std::string describe() const;
};

const std::vector<std::string>& fpu_methods();

struct CheckConfig {
  std::string suite = "all";
  bool negative_control = false;
  unsigned long long seed = 20240611ULL;

  void validate() const;
};

const std::vector<std::string>& check_suites();

struct OrderConfig {
  std::string method = "stormer_verlet";
  double t_final = 1.0;
  std::vector<double> h_values{0.1, 0.05, 0.025, 0.0125};
  std::string out;  ///< optional CSV

  void validate() const;
};

/// Methods accepted by `order`.
const std::vector<std::string>& order_methods();

/// Reads `key = value` lines; blank lines and lines starting with '#' are
/// skipped. Throws ConfigError on malformed lines or unreadable files.
std::vector<std::pair<std::string, std::string>> read_key_value_file(const std::string& path);

/// Parses "a,b,c" into doubles.
std::vector<double> parse_double_list(const std::string& text);

}  // namespace genvi::harness
