#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace csvortex::app {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  bool quick = false;  // fewer samples and configurations where a check sweeps
  std::uint64_t seed = 1;
};

/// The nine acceptance properties. `ids` selects a subset (1-based); empty runs all.
std::vector<CheckResult> run_verify(const VerifyOptions& opt, const std::vector<int>& ids = {});

/// One line: "PASS  3 projection-algebra  <detail>  (1.2 s)".
std::string format_result(const CheckResult& r);

}  // namespace csvortex::app
