// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chicrit::cli {

/// Exit codes of the `chicrit` tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitIndeterminate = 2;  // only with --strict

/// Entry point for `chicrit <analyze|synth|validate|curves> [flags]`.
/// Errors are reported on `err` as a single `error: <code>: <detail>` line.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Same as above with argv[0] omitted.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chicrit::cli
