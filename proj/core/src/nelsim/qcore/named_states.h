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

#ifndef NELSIM_QCORE_NAMED_STATES_H
#define NELSIM_QCORE_NAMED_STATES_H

#include <string>
#include <string_view>

#include "nelsim/qcore/state.h"

namespace nelsim {

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

/// Six-state index 0..5 in the order |0>, |1>, |+>, |->, |i>, |-i>.
PureState six_state_ket(size_t s);
DensityMatrix six_state(size_t s);
constexpr size_t NUM_SIX_STATES = 6;

PureState bell_ket(BellState which);
DensityMatrix bell(BellState which);

/// p |psi-><psi-| + (1 - p) I/4.
DensityMatrix werner(double p);
/// q |psi-><psi-| + (1 - q) |0><0| (x) I/2.
DensityMatrix rho0(double q);
/// (1/4)[rho0(q) + rho_A (x) sigma_B + sigma_A (x) rho_B + sigma_A (x) sigma_B] with rho_A, rho_B the marginals of rho0(q).
DensityMatrix hirsch(double q, const DensityMatrix &sigma_a, const DensityMatrix &sigma_b);

/// Single-qubit state token: ket0 ket1 plus minus plus_i minus_i mixed, or s0..s5 for the six-state list.
DensityMatrix qubit_state(std::string_view token);

/// Parses "werner:p", "rho0:q", "hirsch:q:<tokA>:<tokB>", "bell:phi+|phi-|psi+|psi-", "sixstate:s",
/// "product:<tokA>:<tokB>", or "mixed".
DensityMatrix named_state(std::string_view spec);

}  // namespace nelsim

#endif
