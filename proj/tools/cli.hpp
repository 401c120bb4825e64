// Copyright 2026 The subtok Authors
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

#ifndef SUBTOK_TOOLS_CLI_HPP_
#define SUBTOK_TOOLS_CLI_HPP_

#include <iosfwd>

namespace subtok {

// Runs the command-line front end over the given streams.
// Exit codes: 0 success, 1 usage error, 2 data/validation error.
int RunCli(int argc, const char* const* argv, std::istream& in,
           std::ostream& out, std::ostream& err);

}  // namespace subtok

#endif  // SUBTOK_TOOLS_CLI_HPP_
