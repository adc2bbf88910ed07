#pragma once

#include <string>
#include <vector>

#include "pauli2d/config.hpp"

namespace pauli2d {

inline constexpr const char* kVersion = "1.0.0";

struct Artifact {
  std::string name;     // file name inside the output directory
  std::string content;
};

struct TaskResult {
  Json report;          // {"task", "version", "config", "status", "result"}
  std::string report_name;
  std::vector<Artifact> artifacts;
  // the task ran but a numerical requirement was not met
  bool numerical_failure = false;
};

const std::vector<std::string>& task_names();

// Runs one pipeline; throws ConfigError/DomainError/NumericalError for
// failures that prevent a report.
TaskResult run_task(const std::string& task, const ScenarioConfig& cfg);

// Serialized report with 17 significant digits.
std::string report_text(const TaskResult& r);

}  // namespace pauli2d
