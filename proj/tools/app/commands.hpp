#pragma once

namespace csvortex::app {

/// Exit codes: 0 success, 1 failed verification or runtime error, 2 configuration error or
/// unsupported configuration, 3 convergence failure in strict mode.
int run_command(int argc, char** argv);

}  // namespace csvortex::app
