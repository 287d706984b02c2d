#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pytrim {

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string out;
  std::string err;
  std::chrono::duration<double> duration{0};
};

struct ProcessOptions {
  std::optional<std::filesystem::path> cwd;
  std::optional<std::chrono::duration<double>> timeout;
};

/// Runs argv[0] (searched on PATH) with captured stdout/stderr. A timed-out
/// child is killed. Throws Error(IoError) if the process cannot be spawned.
ProcessResult run_process(const std::vector<std::string> &argv, const ProcessOptions &options = {});

/// Resolves an executable name against PATH; absolute/relative paths are
/// checked directly.
std::optional<std::filesystem::path> find_executable(const std::string &name);

} // namespace pytrim
