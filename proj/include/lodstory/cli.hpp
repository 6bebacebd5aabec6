#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lodstory::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailed = 1,
  kIoFailure = 2,
  kEndpointFailure = 3,
  kUsage = 64,
};

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lodstory::cli
