// Runs the nine acceptance checks and prints one PASS/FAIL line per check.
// Exit status is nonzero when any check fails.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "verify.hpp"

int main(int argc, char** argv) {
  csvortex::app::VerifyOptions opt;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--quick") opt.quick = true;
  }
  const auto results = csvortex::app::run_verify(opt);
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s\n", csvortex::app::format_result(r).c_str());
    std::fflush(stdout);
    failed += !r.pass;
  }
  std::printf("%d of %zu checks passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
