/*
 * Copyright 2026 The Footprint Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FOOTPRINT_TOOLS_CLI_H_
#define FOOTPRINT_TOOLS_CLI_H_

#include <string>
#include <vector>

namespace footprint::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInternalError = 2;

// Entry point of the `footprint` tool. Subcommands: propagate, directions,
// eval-expansion, eval-map, eval-kl, synth, render, losses-check.
int Run(int argc, char** argv);

// Same as Run, with argv[0] supplied internally. Used by tests.
int Run(const std::vector<std::string>& args);

}  // namespace footprint::cli

#endif  // FOOTPRINT_TOOLS_CLI_H_
