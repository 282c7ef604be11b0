#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cone_fixpoint {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
  kExitInternal = 4,
};

/// Entry point of the `cone_fixpoint` command line tool. Subcommands:
///
///   solve    run the augmented iteration and write the trace CSV
///   certify  solve (or load a trace with --verify) and write a certificate
///   omega    report the two Omega bounds at a point and test membership
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with args[0] being the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cone_fixpoint
