#pragma once

#include <iosfwd>

namespace pairstate::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitValidation = 3,
  kExitNonConvergence = 4,
  kExitDegenerate = 5,
  kExitIo = 6,
};

// Subcommands:
//   tomo <files...> --out DIR
//   simulate --config FILE --out DIR
//   sweep --config FILE --out FILE
//   metrics <file>
// Every subcommand accepts --config FILE and repeated --set key=value, plus
// shorthands (--seed, --mu, --alpha, --eta, --n-max, --scale) that override
// config keys.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace pairstate::cli
