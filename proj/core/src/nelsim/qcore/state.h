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

#ifndef NELSIM_QCORE_STATE_H
#define NELSIM_QCORE_STATE_H

#include "nelsim/qcore/linalg.h"

namespace nelsim {

/// A state vector on a power-of-two dimension; normalized unless flagged subnormalized.
class PureState {
   public:
    /// Validates finiteness and unit norm (within TOLERANCE).
    static PureState from_amplitudes(Vector amps);
    /// Accepts any nonzero norm at most 1 and marks the state subnormalized.
    static PureState subnormalized(Vector amps);
    static PureState basis(size_t dim, size_t index);

    size_t dim() const {
        return (size_t)amps_.size();
    }
    const Vector &amplitudes() const {
        return amps_;
    }
    Complex operator[](size_t k) const {
        return amps_((Eigen::Index)k);
    }
    bool is_subnormalized() const {
        return subnormalized_;
    }
    double norm2() const {
        return amps_.squaredNorm();
    }
    Matrix projector() const {
        return outer(amps_);
    }

   private:
    PureState(Vector amps, bool subnormalized) : amps_(std::move(amps)), subnormalized_(subnormalized) {
    }
    Vector amps_;
    bool subnormalized_;
};

/// Hermitian, positive semidefinite, unit trace (each to TOLERANCE). Violations are rejected, never repaired.
class DensityMatrix {
   public:
    static DensityMatrix from_matrix(const Matrix &m);
    static DensityMatrix from_pure(const PureState &psi);
    static DensityMatrix maximally_mixed(size_t dim);

    size_t dim() const {
        return (size_t)m_.rows();
    }
    const Matrix &matrix() const {
        return m_;
    }
    Complex operator()(size_t i, size_t j) const {
        return m_((Eigen::Index)i, (Eigen::Index)j);
    }

   private:
    explicit DensityMatrix(Matrix m) : m_(std::move(m)) {
    }
    Matrix m_;
};

/// Hermitian to TOLERANCE, no positivity requirement.
class HermitianOp {
   public:
    static HermitianOp from_matrix(const Matrix &m);

    size_t dim() const {
        return (size_t)m_.rows();
    }
    const Matrix &matrix() const {
        return m_;
    }
    Complex operator()(size_t i, size_t j) const {
        return m_((Eigen::Index)i, (Eigen::Index)j);
    }

   private:
    explicit HermitianOp(Matrix m) : m_(std::move(m)) {
    }
    Matrix m_;
};

bool all_finite(const Matrix &m);

}  // namespace nelsim

#endif
