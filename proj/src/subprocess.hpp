#pragma once

#include <optional>
#include <string>

namespace orf::detail {

struct ProcessResult {
  int exit_status = 0;     // exit code, or 128 + signal number
  bool timed_out = false;  // the child was killed after the deadline
  std::string stdout_text;
  std::string stderr_text;
};

/// Runs `/bin/sh -c command_line` with stdin closed, capturing both output
/// streams. Throws std::system_error if the process cannot be started.
ProcessResult run_shell(const std::string& command_line, std::optional<double> timeout_seconds);

}  // namespace orf::detail
