/*
 * Copyright 2026 The privagg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PRIVAGG_TOOLS_TOOL_UTIL_H_
#define PRIVAGG_TOOLS_TOOL_UTIL_H_

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "absl/status/statusor.h"
#include "privagg/status.h"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

namespace privagg::tools {

// Stable exit codes shared by every binary.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBind = 3;
inline constexpr int kExitSnapshot = 4;
inline constexpr int kExitAllRejected = 5;

// Logs to stderr at the level named by PRIVAGG_LOG (trace, debug, info,
// warn, error, off); warn by default.
inline std::shared_ptr<spdlog::logger> InitLogging(const std::string& name) {
  auto logger = spdlog::stderr_color_mt(name);
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("PRIVAGG_LOG"); env != nullptr) {
    level = spdlog::level::from_str(env);
  }
  logger->set_level(level);
  logger->set_pattern("%Y-%m-%dT%H:%M:%S.%e %n %^%l%$ %v");
  return logger;
}

inline absl::StatusOr<std::string> ReadFile(const std::string& path,
                                            ErrorKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Error(kind, "cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace privagg::tools

#endif  // PRIVAGG_TOOLS_TOOL_UTIL_H_
