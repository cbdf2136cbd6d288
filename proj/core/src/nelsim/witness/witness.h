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

#ifndef NELSIM_WITNESS_WITNESS_H
#define NELSIM_WITNESS_WITNESS_H

#include <array>
#include <nlohmann/json.hpp>
#include <string>

#include "nelsim/qcore/state.h"

namespace nelsim {

/// beta[s][t] over the six-state list (index order |0>, |1>, |+>, |->, |i>, |-i>).
using SixTable = std::array<std::array<double, 6>, 6>;

double sum_abs(const SixTable &table);

/// A two-qubit entanglement witness W for `target` with completeness gap eta and its six-state decomposition.
struct Witness {
    HermitianOp W;
    double eta;
    SixTable beta;
    DensityMatrix target;
    std::string target_spec;
};

/// W = (|phi><phi|)^{T_B} for the eigenvector phi of rho^{T_B} with the most negative eigenvalue.
/// Throws NotEntangledOrPptError when that eigenvalue is >= -1e-9.
Witness ppt_witness(const DensityMatrix &rho, std::string target_spec = "");

/// Canonical beta with sum_{s,t} beta[s][t] tau_s^T (x) omega_t^T = W, via the Pauli expansion of W.
SixTable tomographic_decomposition(const HermitianOp &w);
SixTable tomographic_decomposition(const Matrix &w);
/// sum_{s,t} beta[s][t] tau_s^T (x) omega_t^T.
Matrix reconstruct_witness(const SixTable &beta);

/// Tr[W rho].
double witness_value(const Witness &w, const DensityMatrix &rho);

nlohmann::json witness_to_json(const Witness &w);

}  // namespace nelsim

#endif
