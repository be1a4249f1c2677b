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

#pragma once

#include <string_view>

namespace qsig {

/// kReferee compares states by exact fidelity, which only the simulator
/// can do. kProtocol uses physically realizable measurements.
enum class Mode { kReferee, kProtocol };

std::string_view to_string(Mode mode);
/// Throws std::invalid_argument on an unknown name.
Mode parse_mode(std::string_view name);

}  // namespace qsig
