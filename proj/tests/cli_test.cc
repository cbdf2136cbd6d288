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


#include <gtest/gtest.h>

#include <sstream>

#include "cli/cli.h"
#include "cli/selftest.h"

using namespace nelsim::cli;

namespace {

std::vector<std::string> words(const std::string &line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string w; in >> w;) {
        out.push_back(w);
    }
    return out;
}

}  // namespace

TEST(Cli, ChshReportHasSchemaAndQuantumRate) {
    CommandOutput o = execute(words("chsh --rounds 200000 --seed 1"));
    ASSERT_EQ(o.exit_code, Ok);
    auto report = nlohmann::json::parse(o.report);
    EXPECT_EQ(report["schema"], REPORT_SCHEMA);
    EXPECT_EQ(report["classical_optimum"], 0.75);
    EXPECT_NEAR(o.summary["quantum_rate"].get<double>(), 0.8536, 0.005);
}

TEST(Cli, SameArgumentsGiveIdenticalReports) {
    for (const char *line : {"chsh --rounds 10000 --seed 3", "edqc --state werner:0.9 --mode separable --rounds 5000 --seed 2",
                             "certify --state werner:0.95 --tcf-n 8 --repetitions 300 --seed 5"}) {
        EXPECT_EQ(execute(words(line)).report, execute(words(line)).report) << line;
    }
}

TEST(Cli, ValidationErrorsExitTwo) {
    EXPECT_EQ(execute(words("chsh --rounds 10")).exit_code, Invalid);
    EXPECT_EQ(execute(words("chsh --seed 1 --bogus 3")).exit_code, Invalid);
    EXPECT_EQ(execute(words("frobnicate --seed 1")).exit_code, Invalid);
    EXPECT_EQ(execute({}).exit_code, Invalid);
    EXPECT_EQ(execute(words("sqg --seed 1 --delta 1.5")).exit_code, Invalid);
    EXPECT_EQ(execute(words("edqc --seed 1 --mode sideways")).exit_code, Invalid);
    EXPECT_EQ(execute(words("dotprod --psi a --psi-prime b --ell 40 --seed 1")).exit_code, Invalid);
    EXPECT_EQ(execute(words("lhv --povm-a missing.json --povm-b missing.json --seed 1")).exit_code, Invalid);
    EXPECT_EQ(execute(words("sqg --state werner:2 --seed 1")).exit_code, Invalid);
    CommandOutput o = execute(words("chsh --seed 1 --bogus 3"));
    EXPECT_FALSE(o.report.empty());
    EXPECT_TRUE(o.summary.contains("error"));
}

TEST(Cli, SeparableStateIsReportedNotEntangled) {
    CommandOutput o = execute(words("sqg --state werner:0.2 --seed 1"));
    ASSERT_EQ(o.exit_code, Ok);
    EXPECT_EQ(o.summary["verdict"], "NOT-ENTANGLED");
}

TEST(Cli, EdqcModes) {
    EXPECT_EQ(execute(words("edqc --state werner:0.9 --mode honest --seed 2")).summary["verdict"], "ENTANGLED");
    EXPECT_EQ(execute(words("edqc --state werner:0.9 --mode separable --seed 2")).summary["verdict"], "NOT-ENTANGLED");
    EXPECT_EQ(execute(words("edqc --state werner:0.9 --mode cheat --seed 2")).summary["verdict"], "ENTANGLED");
}

TEST(Cli, RspSummaryCountsRounds) {
    CommandOutput o = execute(words("rsp --n 8 --rounds 200 --seed 1"));
    ASSERT_EQ(o.exit_code, Ok);
    EXPECT_EQ(o.summary["rounds"], 200);
    EXPECT_EQ(o.summary["aborts"], 0);
    size_t lines = 0;
    for (char c : o.report) {
        lines += c == '\n';
    }
    EXPECT_EQ(lines, 200u);
}

TEST(Cli, SelftestPasses) {
    CommandOutput o = execute(words("selftest"));
    EXPECT_EQ(o.exit_code, Ok);
    EXPECT_TRUE(o.summary["passed"].get<bool>());
}

TEST(Selftest, SuitesReportFailures) {
    SuiteResult r;
    r.check(true, "fine");
    r.check(false, "broken");
    EXPECT_FALSE(r.passed);
    EXPECT_EQ(r.checks, 2u);
    ASSERT_EQ(r.failures.size(), 1u);
    EXPECT_EQ(r.failures[0], "broken");
}
