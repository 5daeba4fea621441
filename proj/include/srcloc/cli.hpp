#pragma once

#include <string>
#include <vector>

namespace srcloc::cli {

/// Process exit codes of the `srcloc` tool.
enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 2,    // unknown/missing/conflicting flags
    kInvalidValue = 3,  // a flag value outside its valid range
    kFileError = 4,     // input missing or output not writable
    kParseError = 5,    // malformed input file
    kRuntimeError = 6,  // the pipeline itself failed (e.g. no candidate sources)
};

int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args[0] is the program name

}  // namespace srcloc::cli
