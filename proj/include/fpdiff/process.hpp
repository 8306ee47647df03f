#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace fpdiff {

struct ProcessResult {
  int exit_status = 0;  // exit code, or 128 + signal number
  bool timed_out = false;
  std::string out;
  std::string err;
  std::chrono::microseconds wall_time{0};
};

/// Runs `argv` (PATH lookup on argv[0]) and captures stdout and stderr.
/// The child runs in its own process group; on timeout the whole group is
/// killed. Throws fpdiff::Error if the program cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv, std::chrono::milliseconds timeout);

}  // namespace fpdiff
