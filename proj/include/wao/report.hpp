#pragma once

#include <optional>
#include <string>

#include "wao/scenario.hpp"

namespace wao {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
  std::string command;
  std::string scenario;  // path; unused by selftest
  std::optional<std::string> set;
  std::optional<std::string> tuple;
  int degree = 1;
  std::optional<std::string> level;
  std::optional<long long> bound;
};

struct RunResult {
  int exit_code = 0;  // 0 success, 1 certificate failure, 2 input error
  Json report;
  std::string text;
};

/// Runs one command and never throws: input errors and refusals become exit code 2.
RunResult run_command(const RunOptions& opts);

Json cocycle_table(const Cochain& c);

}  // namespace wao
