#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hermitk::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes mirror the report outcome.
inline constexpr int kPass = 0;
inline constexpr int kFail = 1;
inline constexpr int kBadInput = 2;

/// Runs one subcommand; args exclude the program name. Documents are read
/// from --input (a path, or "-" for `in`). The report goes to `out`,
/// usage diagnostics to `err`. Output depends only on args and input.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace hermitk::cli
