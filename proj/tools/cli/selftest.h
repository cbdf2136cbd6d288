// Copyright 2026 The nelsim Authors
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


#ifndef NELSIM_TOOLS_SELFTEST_H
#define NELSIM_TOOLS_SELFTEST_H

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace nelsim::cli {

struct SuiteResult {
    std::string name;
    bool passed = true;
    uint64_t checks = 0;
    /// The first few failed checks.
    std::vector<std::string> failures;
    double seconds = 0;

    void check(bool ok, const std::string &what);
};

SuiteResult fine_graining_suite();
SuiteResult resolution_suite();
SuiteResult partial_transpose_suite();
SuiteResult replay_suite(unsigned workers);

std::vector<SuiteResult> run_selftest(unsigned workers);
/// Timing is left out so the report replays byte-identically.
nlohmann::json selftest_to_json(const std::vector<SuiteResult> &suites);

}  // namespace nelsim::cli

#endif
