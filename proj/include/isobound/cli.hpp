#pragma once

namespace isobound {

// Command-line dispatch. Exit codes: 0 success, 1 verification failure,
// 2 usage error (bad flags, missing or malformed input files).
int cli_main(int argc, const char* const* argv);

}  // namespace isobound
