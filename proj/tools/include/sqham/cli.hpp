#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace sqham::cli {

/// Runs one command line. Exit codes: 0 success, 1 a checked inequality
/// failed, 2 usage or input error.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv);

}  // namespace sqham::cli
