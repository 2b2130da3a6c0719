#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nsc::cli {

struct SelfCheck {
  std::string name;
  bool passed;
  std::string detail;
};

/// Fast invariant suite behind the `selftest` subcommand.
std::vector<SelfCheck> run_selftest(std::uint64_t seed);

}  // namespace nsc::cli
