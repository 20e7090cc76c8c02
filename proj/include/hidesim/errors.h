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
#ifndef HIDESIM_ERRORS_H_
#define HIDESIM_ERRORS_H_

#include <stdexcept>
#include <string>

namespace hidesim {

// Invalid parameters, shape mismatches and schema violations.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input files (TSV corpora, checkpoints, pool dumps).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical computation produced NaN/Inf or an otherwise undefined result.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hidesim

#endif  // HIDESIM_ERRORS_H_
