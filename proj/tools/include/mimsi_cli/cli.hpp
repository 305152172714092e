// Copyright 2026 The mimsi Authors
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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mimsi_cli/config.hpp"

namespace mimsi::cli {

namespace fs = std::filesystem;

struct RunContext {
    std::string subcommand;
    json config;  // preset and file merged, before validation
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    fs::path out_dir;
    std::string preset;
};

/// Each command validates ctx.config, writes its files into ctx.out_dir and
/// returns their names (relative to out_dir).
std::vector<std::string> cmd_build_cluster(const RunContext &ctx);
std::vector<std::string> cmd_condition(const RunContext &ctx);
std::vector<std::string> cmd_decompose(const RunContext &ctx);
std::vector<std::string> cmd_expressibility(const RunContext &ctx);
std::vector<std::string> cmd_haar_run(const RunContext &ctx);

/// Exit codes.
enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericError = 3, kIoError = 4 };

/// Whole command line, as main() sees it. Never throws.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace mimsi::cli
