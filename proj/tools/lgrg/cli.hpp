#pragma once

namespace lgrg::cli {

/// Parses arguments and dispatches to a subcommand; returns the exit code.
int run(int argc, char** argv);

}  // namespace lgrg::cli
