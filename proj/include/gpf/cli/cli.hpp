// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace gpf {

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitParse = 2,       // bad flags, malformed JSON or binary input
    kExitValidation = 3,  // well-formed input with out-of-range values
    kExitRuntime = 4,     // missing files, I/O failures, numerical failures
};

/// Entry point of the `gpf` tool. args excludes the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace gpf
