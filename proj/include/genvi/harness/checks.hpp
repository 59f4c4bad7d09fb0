#pragma once

#include <string>
#include <vector>

#include "genvi/harness/config.hpp"

namespace genvi::harness {

enum class Relation { at_most, at_least };

struct CheckLine {
  std::string suite;
  std::string name;
  double measured;
  double threshold;
  Relation relation;
  bool pass;
};

CheckLine make_check(std::string suite, std::string name, double measured, Relation rel, double threshold);

std::vector<CheckLine> run_check_suite(const CheckConfig& cfg);

/// "PASS suite/name measured <= threshold"
std::string format_check_line(const CheckLine& line);

}  // namespace genvi::harness
