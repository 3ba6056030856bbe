#pragma once

namespace oxmc::cli {

// Full command-line entry point. Exit codes: 0 success, 1 usage,
// 2 data error, 3 internal.
int run(int argc, const char* const* argv);

}  // namespace oxmc::cli
