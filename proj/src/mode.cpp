// Copyright 2026 The qsig Authors
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

#include "qsig/mode.hpp"

#include <stdexcept>

namespace qsig {

std::string_view to_string(Mode mode) { return mode == Mode::kReferee ? "referee" : "protocol"; }

Mode parse_mode(std::string_view name) {
  if (name == "referee") return Mode::kReferee;
  if (name == "protocol") return Mode::kProtocol;
  throw std::invalid_argument("mode must be referee or protocol");
}

}  // namespace qsig
