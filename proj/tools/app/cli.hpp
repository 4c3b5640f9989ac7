// Copyright 2026 The shapfair Authors
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
#ifndef SHAPFAIR_APP_CLI_HPP
#define SHAPFAIR_APP_CLI_HPP

#include <iosfwd>

namespace shapfair::app {

/// Parses arguments, dispatches to a subcommand and maps errors to the exit
/// code contract: 0 ok, 1 error (JSON on err), 2 fairness violation.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace shapfair::app

#endif  // SHAPFAIR_APP_CLI_HPP
