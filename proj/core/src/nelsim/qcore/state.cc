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

#include "nelsim/qcore/state.h"

#include <cmath>
#include <string>

#include "nelsim/qcore/errors.h"

using namespace nelsim;

bool nelsim::all_finite(const Matrix &m) {
    for (Eigen::Index i = 0; i < m.size(); i++) {
        const Complex &c = m.data()[i];
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            return false;
        }
    }
    return true;
}

static void check_vector(const Vector &amps) {
    if (!is_power_of_two((size_t)amps.size())) {
        throw ValidationError("state dimension " + std::to_string(amps.size()) + " is not a power of two");
    }
    if (!all_finite(amps)) {
        throw ValidationError("state has a non-finite amplitude");
    }
}

PureState PureState::from_amplitudes(Vector amps) {
    check_vector(amps);
    double n2 = amps.squaredNorm();
    if (std::abs(n2 - 1) > TOLERANCE) {
        throw ValidationError("state norm^2 " + std::to_string(n2) + " differs from 1");
    }
    return PureState(std::move(amps), false);
}

PureState PureState::subnormalized(Vector amps) {
    check_vector(amps);
    double n2 = amps.squaredNorm();
    if (!(n2 > 0) || n2 > 1 + TOLERANCE) {
        throw ValidationError("subnormalized state needs 0 < norm^2 <= 1, got " + std::to_string(n2));
    }
    return PureState(std::move(amps), true);
}

PureState PureState::basis(size_t dim, size_t index) {
    if (index >= dim) {
        throw ValidationError("basis index out of range");
    }
    Vector v = Vector::Zero((Eigen::Index)dim);
    v((Eigen::Index)index) = 1;
    return from_amplitudes(std::move(v));
}

DensityMatrix DensityMatrix::from_matrix(const Matrix &m) {
    if (m.rows() != m.cols() || !is_power_of_two((size_t)m.rows())) {
        throw ValidationError("density matrix must be square with power-of-two dimension");
    }
    if (!all_finite(m)) {
        throw ValidationError("density matrix has a non-finite entry");
    }
    double defect = hermitian_defect(m);
    if (defect > TOLERANCE) {
        throw ValidationError("density matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    }
    Complex tr = m.trace();
    if (std::abs(tr - 1.0) > TOLERANCE) {
        throw ValidationError("density matrix trace " + std::to_string(tr.real()) + " differs from 1");
    }
    double lo = min_eigenvalue(m);
    if (lo < -TOLERANCE) {
        throw NotPsdError("density matrix has negative eigenvalue " + std::to_string(lo), lo);
    }
    return DensityMatrix(m);
}

DensityMatrix DensityMatrix::from_pure(const PureState &psi) {
    if (psi.is_subnormalized()) {
        throw ValidationError("cannot build a density matrix from a subnormalized state");
    }
    return DensityMatrix(psi.projector());
}

DensityMatrix DensityMatrix::maximally_mixed(size_t dim) {
    if (!is_power_of_two(dim)) {
        throw ValidationError("dimension is not a power of two");
    }
    return DensityMatrix(Matrix::Identity((Eigen::Index)dim, (Eigen::Index)dim) / (double)dim);
}

HermitianOp HermitianOp::from_matrix(const Matrix &m) {
    if (m.rows() != m.cols() || !is_power_of_two((size_t)m.rows())) {
        throw ValidationError("operator must be square with power-of-two dimension");
    }
    if (!all_finite(m)) {
        throw ValidationError("operator has a non-finite entry");
    }
    double defect = hermitian_defect(m);
    if (defect > TOLERANCE) {
        throw ValidationError("operator is not Hermitian (defect " + std::to_string(defect) + ")");
    }
    return HermitianOp(m);
}
