#pragma once

namespace disambig {

// Full command-line entry point: parses argv, resolves flag/config-file/
// default precedence, dispatches the subcommand, and maps failures to exit
// codes (0 success, 1 usage, 2 data error, 3 model error).
int run_cli(int argc, const char* const* argv);

}  // namespace disambig
