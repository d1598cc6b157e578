#pragma once

#include <iosfwd>

namespace sitest {

// Entry point shared by the binary and the CLI tests. Exit codes: 0 success,
// 2 invalid input (bad file, unknown flag, inconsistent dimensions),
// 3 numerical failure (non-identifiable fit, singular transform).
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace sitest
