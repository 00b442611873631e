#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include "config.hpp"

namespace deltaloop::cli {

struct RunResult {
  std::vector<std::filesystem::path> files;  // written artifacts, in write order
  std::size_t flagged = 0;                   // rows whose hypotheses are not certified
};

// Executes a validated configuration and writes its artifacts under config.out.
// Core exceptions propagate to the caller.
RunResult run(const RunConfig& config, std::ostream& log);

}  // namespace deltaloop::cli
