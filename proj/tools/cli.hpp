// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tritterlab::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kFileNotFound = 2,
    kParseFailure = 3,
    kFitFailure = 4,
};

/// Runs the command line @p args (without the program name). Normal output
/// goes to @p out unless --output is given; diagnostics go to @p err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tritterlab::cli
