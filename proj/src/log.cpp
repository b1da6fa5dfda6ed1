// Copyright 2026 The mdlsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "mdlsynth/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

#include "mdlsynth/error.hpp"

namespace mdlsynth {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kChecksum: return "checksum_mismatch";
    case ErrorCode::kBudgetExceeded: return "budget_exceeded";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kNotConverged: return "not_converged";
    case ErrorCode::kStreamExhausted: return "stream_exhausted";
  }
  return "unknown";
}

namespace log {

namespace {

std::atomic<Level> g_level{Level::kWarn};
std::mutex g_mutex;
std::string g_run_id = "-";

std::string_view level_name(Level l) {
  switch (l) {
    case Level::kDebug: return "debug";
    case Level::kInfo: return "info";
    case Level::kWarn: return "warn";
    case Level::kError: return "error";
    case Level::kOff: return "off";
  }
  return "?";
}

}  // namespace

void set_level(Level l) { g_level.store(l); }
Level level() { return g_level.load(); }

Level parse_level(std::string_view name) {
  if (name == "debug") return Level::kDebug;
  if (name == "info") return Level::kInfo;
  if (name == "warn") return Level::kWarn;
  if (name == "error") return Level::kError;
  if (name == "off") return Level::kOff;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown log level '" + std::string(name) + "'");
}

void set_run_id(std::string run_id) {
  std::lock_guard lock(g_mutex);
  g_run_id = std::move(run_id);
}

void write(Level l, std::string_view message) {
  if (l < g_level.load() || l == Level::kOff) return;
  std::lock_guard lock(g_mutex);
  std::cerr << "level=" << level_name(l) << " run=" << g_run_id << " msg=\""
            << message << "\"\n";
}

}  // namespace log
}  // namespace mdlsynth
