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

#include "nelsim/qcore/haar.h"

#include "nelsim/qcore/errors.h"

using namespace nelsim;

PureState nelsim::haar_state(size_t dim, Rng &rng) {
    if (!is_power_of_two(dim)) {
        throw ValidationError("Haar state dimension must be a power of two");
    }
    Vector v((Eigen::Index)dim);
    while (true) {
        for (size_t k = 0; k < dim; k++) {
            double re = rng.gaussian();
            double im = rng.gaussian();
            v((Eigen::Index)k) = Complex(re, im);
        }
        double n = v.norm();
        if (n > 1e-150) {
            v /= n;
            return PureState::from_amplitudes(v);
        }
    }
}

PureState nelsim::haar_qubit(Rng &rng) {
    return haar_state(2, rng);
}
