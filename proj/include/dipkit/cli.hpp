#pragma once

namespace dipkit::cli {

/// Runs one command line. Returns 0 on success, 1 on invalid input or flags,
/// 2 when a computation fails (fit failure, table out of range, ...).
int run(int argc, char** argv);

}  // namespace dipkit::cli
