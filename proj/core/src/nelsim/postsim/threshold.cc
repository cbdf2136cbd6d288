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


#include "nelsim/postsim/threshold.h"

#include <cmath>
#include <memory>

#include "nelsim/qcore/errors.h"

using namespace nelsim;

ThresholdResult nelsim::threshold_search(const DecisionOracle &oracle, double eps) {
    if (!(eps > 0) || eps >= 0.25) {
        throw ValidationError("threshold search needs eps in (0, 1/4)");
    }
    ThresholdResult res;
    double l = 0, r = 1;
    while (r - l > 4 * eps) {
        double u1 = l + (r - l) / 3;
        double u2 = l + 2 * (r - l) / 3;
        bool b1 = oracle(u1);
        bool b2 = oracle(u2);
        res.probes += 2;
        if (b1 && !b2 && u2 - eps > u1 + eps) {
            throw OracleViolationError("oracle placed the value below u1 but not below u2");
        }
        if (!b1) {
            l = u1 - eps;
        } else {
            r = u2 + eps;
        }
        if (l >= r) {
            throw OracleViolationError("oracle answers leave an empty interval");
        }
    }
    res.value = (l + r) / 2;
    return res;
}

DecisionOracle nelsim::majority_decision_oracle(ValueEstimator estimator, unsigned samples, unsigned repeats,
                                                Rng &rng) {
    if (samples == 0 || repeats == 0) {
        throw ValidationError("decision oracle needs positive sample and repeat counts");
    }
    return [estimator = std::move(estimator), samples, repeats, &rng](double u) {
        unsigned yes = 0;
        for (unsigned j = 0; j < repeats; j++) {
            unsigned below = 0;
            for (unsigned k = 0; k < samples; k++) {
                below += estimator(rng) <= u ? 1 : 0;
            }
            unsigned above = samples - below;
            unsigned gap = below > above ? below - above : above - below;
            bool w = 3 * gap > samples && below >= above;
            yes += w ? 1 : 0;
        }
        return 2 * yes > repeats;
    };
}
