#pragma once

#include <ostream>

namespace lorentz {

/// Command-line entry point: subcommands norm, certify, construct-wq,
/// equiv-norm, check and gallery. Returns 0 on success or a passing verdict,
/// 1 on a failing verdict, 2 on a usage or input error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lorentz
