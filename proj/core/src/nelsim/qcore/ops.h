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

#ifndef NELSIM_QCORE_OPS_H
#define NELSIM_QCORE_OPS_H

#include <cstdint>

#include "nelsim/qcore/state.h"

namespace nelsim {

enum class Subsystem { A, B };

/// Transposes one tensor factor of a two-qubit operator by permuting entries (an exact involution).
Matrix partial_transpose(const Matrix &op, Subsystem subsystem);
HermitianOp partial_transpose(const HermitianOp &op, Subsystem subsystem);

/// Traces out every qubit whose bit is clear in keep_mask (bit q selects qubit q; qubit 0 is most significant).
Matrix partial_trace(const Matrix &op, uint64_t keep_mask);
DensityMatrix partial_trace(const DensityMatrix &rho, uint64_t keep_mask);

/// Keep masks for the two halves of a two-qubit state.
constexpr uint64_t KEEP_A = 0b01;
constexpr uint64_t KEEP_B = 0b10;

}  // namespace nelsim

#endif
