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

#include "nelsim/witness/witness.h"

#include <cmath>

#include "nelsim/qcore/errors.h"
#include "nelsim/qcore/json_io.h"
#include "nelsim/qcore/named_states.h"
#include "nelsim/qcore/ops.h"

using namespace nelsim;

constexpr double PPT_THRESHOLD = -1e-9;

double nelsim::sum_abs(const SixTable &table) {
    double total = 0;
    for (const auto &row : table) {
        for (double v : row) {
            total += std::abs(v);
        }
    }
    return total;
}

Witness nelsim::ppt_witness(const DensityMatrix &rho, std::string target_spec) {
    if (rho.dim() != 4) {
        throw ValidationError("ppt_witness needs a two-qubit state");
    }
    Matrix pt = partial_transpose(rho.matrix(), Subsystem::B);
    Eigen::SelfAdjointEigenSolver<Matrix> solver((pt + pt.adjoint()) / 2.0);
    double lambda_min = solver.eigenvalues()(0);
    if (lambda_min >= PPT_THRESHOLD) {
        throw NotEntangledOrPptError(
            "partial transpose has minimum eigenvalue " + std::to_string(lambda_min) + "; state is not NPT",
            lambda_min);
    }
    Vector phi = solver.eigenvectors().col(0);
    Matrix w = partial_transpose(outer(phi), Subsystem::B);
    w = (w + w.adjoint()).eval() / 2.0;
    HermitianOp op = HermitianOp::from_matrix(w);
    SixTable beta = tomographic_decomposition(op);
    return Witness{std::move(op), -lambda_min, beta, rho, std::move(target_spec)};
}

namespace {

// Per-factor coefficients of I, X, Y, Z on the transposed six-state list (tau_4^T = tau_5).
constexpr std::array<std::array<double, 6>, 4> FACTOR_VECTORS = {{
    {1, 1, 0, 0, 0, 0},
    {0, 0, 1, -1, 0, 0},
    {0, 0, 0, 0, -1, 1},
    {1, -1, 0, 0, 0, 0},
}};

}  // namespace

SixTable nelsim::tomographic_decomposition(const Matrix &w) {
    if (w.rows() != 4 || w.cols() != 4) {
        throw ValidationError("tomographic_decomposition needs a two-qubit operator");
    }
    if (hermitian_defect(w) > TOLERANCE) {
        throw ValidationError("tomographic_decomposition needs a Hermitian operator");
    }
    SixTable beta{};
    for (size_t i = 0; i < 4; i++) {
        for (size_t j = 0; j < 4; j++) {
            double c = trace_product(w, kron(pauli(i), pauli(j))).real() / 4;
            if (c == 0) {
                continue;
            }
            for (size_t s = 0; s < 6; s++) {
                for (size_t t = 0; t < 6; t++) {
                    beta[s][t] += c * FACTOR_VECTORS[i][s] * FACTOR_VECTORS[j][t];
                }
            }
        }
    }
    return beta;
}

SixTable nelsim::tomographic_decomposition(const HermitianOp &w) {
    return tomographic_decomposition(w.matrix());
}

Matrix nelsim::reconstruct_witness(const SixTable &beta) {
    Matrix w = Matrix::Zero(4, 4);
    for (size_t s = 0; s < 6; s++) {
        Matrix ts = six_state(s).matrix().transpose();
        for (size_t t = 0; t < 6; t++) {
            if (beta[s][t] != 0) {
                w += beta[s][t] * kron(ts, six_state(t).matrix().transpose());
            }
        }
    }
    return w;
}

double nelsim::witness_value(const Witness &w, const DensityMatrix &rho) {
    if (rho.dim() != w.W.dim()) {
        throw ValidationError("witness and state dimensions differ");
    }
    return trace_product(w.W.matrix(), rho.matrix()).real();
}

nlohmann::json nelsim::witness_to_json(const Witness &w) {
    nlohmann::json beta = nlohmann::json::array();
    for (const auto &row : w.beta) {
        beta.push_back(row);
    }
    return nlohmann::json{
        {"eta", w.eta}, {"beta", std::move(beta)}, {"W", matrix_to_json(w.W.matrix())}, {"target", w.target_spec}};
}
