#pragma once

#include <iosfwd>

namespace genvi::harness {

/// Exit codes: 0 success, 1 check failure, 2 configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace genvi::harness
