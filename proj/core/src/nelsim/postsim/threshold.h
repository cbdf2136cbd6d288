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


#ifndef NELSIM_POSTSIM_THRESHOLD_H
#define NELSIM_POSTSIM_THRESHOLD_H

#include <cstdint>
#include <functional>

#include "nelsim/qcore/rng.h"

namespace nelsim {

/// Bit answering "is the hidden value below u", reliable outside a window of width eps around it.
using DecisionOracle = std::function<bool(double u)>;
/// Randomized source of estimates of the hidden value.
using ValueEstimator = std::function<double(Rng &rng)>;

struct ThresholdResult {
    double value = 0;
    unsigned probes = 0;
};

/// Two-probe interval shrink on [0, 1] until the interval is at most 4 eps wide.
ThresholdResult threshold_search(const DecisionOracle &oracle, double eps);

/// Majority over `repeats` of the decision built from `samples` estimates: 1 when clearly more estimates lie at or
/// below u, 0 when it is close or the other way.
DecisionOracle majority_decision_oracle(ValueEstimator estimator, unsigned samples, unsigned repeats, Rng &rng);

}  // namespace nelsim

#endif
