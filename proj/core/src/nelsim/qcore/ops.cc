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

#include "nelsim/qcore/ops.h"

#include <string>
#include <vector>

#include "nelsim/qcore/errors.h"

using namespace nelsim;

Matrix nelsim::partial_transpose(const Matrix &op, Subsystem subsystem) {
    if (op.rows() != 4 || op.cols() != 4) {
        throw ValidationError("partial_transpose supports two-qubit operators only, got dim " + std::to_string(op.rows()));
    }
    Matrix out(4, 4);
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) {
            int ia = i >> 1, ib = i & 1, ja = j >> 1, jb = j & 1;
            int si, sj;
            if (subsystem == Subsystem::B) {
                si = (ia << 1) | jb;
                sj = (ja << 1) | ib;
            } else {
                si = (ja << 1) | ib;
                sj = (ia << 1) | jb;
            }
            out(i, j) = op(si, sj);
        }
    }
    return out;
}

HermitianOp nelsim::partial_transpose(const HermitianOp &op, Subsystem subsystem) {
    return HermitianOp::from_matrix(partial_transpose(op.matrix(), subsystem));
}

Matrix nelsim::partial_trace(const Matrix &op, uint64_t keep_mask) {
    size_t n = qubit_count((size_t)op.rows());
    if (op.rows() != op.cols()) {
        throw ValidationError("partial_trace needs a square operator");
    }
    if (n < 64 && (keep_mask >> n) != 0) {
        throw ValidationError("keep mask selects qubits beyond the operator's " + std::to_string(n) + " qubits");
    }
    std::vector<size_t> kept, traced;
    for (size_t q = 0; q < n; q++) {
        ((keep_mask >> q) & 1 ? kept : traced).push_back(q);
    }
    auto compose = [&](size_t kept_bits, size_t traced_bits) {
        size_t idx = 0;
        for (size_t k = 0; k < kept.size(); k++) {
            if ((kept_bits >> (kept.size() - 1 - k)) & 1) {
                idx |= (size_t)1 << (n - 1 - kept[k]);
            }
        }
        for (size_t k = 0; k < traced.size(); k++) {
            if ((traced_bits >> (traced.size() - 1 - k)) & 1) {
                idx |= (size_t)1 << (n - 1 - traced[k]);
            }
        }
        return (Eigen::Index)idx;
    };
    size_t dk = (size_t)1 << kept.size();
    size_t dt = (size_t)1 << traced.size();
    Matrix out = Matrix::Zero((Eigen::Index)dk, (Eigen::Index)dk);
    for (size_t i = 0; i < dk; i++) {
        for (size_t j = 0; j < dk; j++) {
            Complex acc = 0;
            for (size_t t = 0; t < dt; t++) {
                acc += op(compose(i, t), compose(j, t));
            }
            out((Eigen::Index)i, (Eigen::Index)j) = acc;
        }
    }
    return out;
}

DensityMatrix nelsim::partial_trace(const DensityMatrix &rho, uint64_t keep_mask) {
    return DensityMatrix::from_matrix(partial_trace(rho.matrix(), keep_mask));
}
