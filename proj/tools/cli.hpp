#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fogseal::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kReject = 2,
  kIo = 3,
  kValidation = 4,
};

/// Runs one command line. `in` stands in for stdin whenever a path is "-".
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace fogseal::cli
