#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace muxrule::cli {

/// Exit codes.
enum Status : int {
    ok = 0,
    error = 1,
    usage = 2,
    parse = 3,
    io = 4,
    resource = 5,
    evaluation = 6,
    structural = 7,
    mismatch = 8,
};

/// Runs one subcommand. `args` excludes the program name. Diagnostics and progress
/// go to `err`; listings (inspect without --out) go to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

} // namespace muxrule::cli
