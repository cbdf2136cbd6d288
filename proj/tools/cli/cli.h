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


#ifndef NELSIM_TOOLS_CLI_H
#define NELSIM_TOOLS_CLI_H

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace nelsim::cli {

constexpr const char *REPORT_SCHEMA = "nelsim/1";

enum ExitCode : int { Ok = 0, Failure = 1, Invalid = 2, Aborted = 3 };

/// Every flag any subcommand accepts; each subcommand reads the fields it declares.
struct RunConfig {
    std::string subcommand;
    std::string state = "werner:0.9";
    std::string source;
    std::string mode = "honest";
    std::string model = "hirsch";
    double delta = 0.2;
    double q = 1.0 / 3.0;
    unsigned ell = 12;
    unsigned tcf_n = 12;
    uint64_t samples = 0;
    std::optional<uint64_t> seed;
    unsigned workers = 1;
    std::string backend = "float";
    std::string physics;
    std::string povm_a;
    std::string povm_b;
    std::string sigma_a = "ket0";
    std::string sigma_b = "ket0";
    std::string psi;
    std::string psi_prime;
    bool keep_tuples = false;
    std::string out;

    /// Throws ValidationError for values outside the subcommand's preconditions.
    void validate() const;
    /// Fields relevant to the subcommand (the output path excluded).
    nlohmann::json to_json() const;
};

/// What a subcommand produced: the report file content, the one-line summary, and the exit code.
struct CommandOutput {
    int exit_code = Ok;
    std::string report;
    nlohmann::json summary;
    /// The --out path, empty when none was given.
    std::string out_path;
};

/// Parses argv (without the program name) and runs the subcommand without touching the filesystem
/// beyond reading input files. Parse and validation failures come back as exit code 2 with the
/// message in `summary["error"]` and usage text in `report`.
CommandOutput execute(const std::vector<std::string> &args);

/// execute() plus writing the report to --out and the summary line to `out`.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace nelsim::cli

#endif
