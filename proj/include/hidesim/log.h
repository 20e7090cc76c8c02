// Copyright 2026 The HideSim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HIDESIM_LOG_H_
#define HIDESIM_LOG_H_

#include <string>

namespace hidesim {

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Threshold from HIDESIM_LOG (error|warn|info|debug), default warn.
LogLevel LogThreshold();
void SetLogThreshold(LogLevel level);
// Writes "[level] message" to stderr when `level` passes the threshold.
void Log(LogLevel level, const std::string& message);

}  // namespace hidesim

#endif  // HIDESIM_LOG_H_
