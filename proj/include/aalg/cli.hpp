#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "aalg/error.hpp"

namespace aalg {

inline constexpr const char* kReportSchema = "aalg-report/1";

/// 0 success, 1 input error, 2 mathematical rejection.
int exit_code_for(ErrorCode code) noexcept;

/// Runs one `aalg` invocation; args excludes the program name. Reports go to
/// out, diagnostics in human mode to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aalg
