#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace leibniz::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 2, kDomainError = 3 };

/// Runs one invocation. `args` excludes the program name, e.g.
/// {"derive", "x*y = 5", "--target", "dy/dx"}. Results go to `out`;
/// diagnostics (parse carets, side conditions, undefined-limit reasons) go
/// to `err`, except in --json mode where errors are reported on `out` as a
/// JSON object. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace leibniz::cli
