// Copyright 2026 The EEG Shield Authors
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

#include "eegshield/common/error.h"

namespace eegshield {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimension:
      return "dimension error";
    case ErrorCode::kLabel:
      return "label error";
    case ErrorCode::kParameter:
      return "parameter error";
    case ErrorCode::kContract:
      return "contract error";
    case ErrorCode::kNumerical:
      return "numerical failure";
    case ErrorCode::kFormat:
      return "format error";
    case ErrorCode::kCorruption:
      return "corruption error";
    case ErrorCode::kValidation:
      return "validation error";
    case ErrorCode::kProtocol:
      return "protocol error";
    case ErrorCode::kIo:
      return "I/O error";
  }
  return "error";
}

}  // namespace eegshield
