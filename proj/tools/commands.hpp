#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hexfem::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kValidation = 2,
  kIo = 3,
};

/// Environment variable that overrides --budget-mb.
inline constexpr const char* kBudgetEnv = "HEXFEM_BUDGET_MB";

/// Entry point shared by main() and the tests. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hexfem::cli
