// Copyright 2026 The warpkit Authors. All Rights Reserved.
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

#pragma once

#include <string>
#include <vector>

namespace warpkit {

/// Exit codes: 0 success, 1 usage error, 2 data or numerical error.
int cli_main(int argc, const char* const* argv);
int cli_main(const std::vector<std::string>& args);

/// Output name used by `sweep`: "<stem>_a<alpha with 2 decimals>.png".
std::string sweep_filename(const std::string& stem, double alpha);

}  // namespace warpkit
