// Copyright 2026 The bhdimer Authors
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

#include <ostream>

#include "bhdimer/io.hpp"

namespace bhd {

enum ExitCode : int { kExitOk = 0, kExitFailed = 1, kExitConfig = 2, kExitNumeric = 3 };

/// Runs one subcommand and writes its artifacts plus manifest.json into
/// cfg.out. Config errors return 2, numerical errors return 3 after writing
/// diagnostics.json. A `validate` check that runs but fails returns 1.
int run(const RunConfig& cfg, std::ostream& log);

}  // namespace bhd
