#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace bcvapp {

struct RunResult {
  Json report;
  bool passed = true;
  std::vector<std::string> files;  // relative to the output directory, in write order
};

/// Runs one command. Writes files into `out_dir` and removes them again if
/// the command throws. A failed check is not an error: the files stay and
/// `passed` is false.
RunResult run(Command cmd, const JobConfig& cfg, const std::filesystem::path& out_dir);

/// 0 all checks passed, 1 a check failed, 2 bad usage or config, 3 computation or I/O error.
enum ExitStatus { kPassed = 0, kChecksFailed = 1, kBadConfig = 2, kRuntimeError = 3 };

}  // namespace bcvapp
