// Copyright 2026 The optqudit Authors
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

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "optqudit/cli/config.hpp"
#include "optqudit/cli/runner.hpp"

int main(int argc, char **argv) {
    using namespace optqudit::cli;
    const std::vector<std::string> args(argv + 1, argv + argc);
    const ParseResult parsed = parse_config(args);
    if (const auto *exit = std::get_if<ParseExit>(&parsed)) {
        (exit->exit_code == 0 ? std::cout : std::cerr) << exit->message << '\n';
        return exit->exit_code;
    }
    try {
        return run(std::get<ScanConfig>(parsed));
    } catch (const std::exception &e) {
        std::cerr << "optqudit: " << e.what() << '\n';
        return 1;
    }
}
