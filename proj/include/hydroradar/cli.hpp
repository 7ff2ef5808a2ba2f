#pragma once

namespace hydroradar {

/// Batch command-line entry point. Subcommands: simulate, estimate,
/// evaluate, tune, plot, rdmap. Returns 0 on success, 1 on domain errors,
/// 2 on usage errors; diagnostics go to stderr, results to files or stdout.
int cli_dispatch(int argc, const char* const* argv);

}  // namespace hydroradar
