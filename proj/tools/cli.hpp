#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nhf/types.hpp"

namespace nhf::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNumericalFailure = 3,
  kPartialSweep = 4,
};

/// Accepts "1.5", "-2i", "i", "0.7+0.25i", "1e-3-2e-2i" and "(re,im)".
/// Throws InvalidArgument.
Complex parse_complex(std::string_view text);

/// Comma separated complex values (parentheses keep their inner comma).
std::vector<Complex> parse_complex_list(std::string_view text);

/// Entry point of the moebius-floquet tool; stdout/stderr are injectable so
/// the test suite can run commands in-process.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nhf::cli
