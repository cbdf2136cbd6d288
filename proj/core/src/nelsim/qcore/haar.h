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

#ifndef NELSIM_QCORE_HAAR_H
#define NELSIM_QCORE_HAAR_H

#include "nelsim/qcore/rng.h"
#include "nelsim/qcore/state.h"

namespace nelsim {

/// Unitarily invariant random pure state: i.i.d. complex Gaussian amplitudes, normalized.
PureState haar_state(size_t dim, Rng &rng);
PureState haar_qubit(Rng &rng);

}  // namespace nelsim

#endif
