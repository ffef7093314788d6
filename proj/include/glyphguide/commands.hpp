#pragma once

namespace glyphguide {

// Exit codes: 0 success, 1 invalid input or configuration, 2 runtime failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitRuntime = 2;

int run_cli(int argc, char** argv);

}  // namespace glyphguide
