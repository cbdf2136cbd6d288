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

#include "nelsim/qcore/linalg.h"

#include <array>
#include <cmath>
#include <string>

#include "nelsim/qcore/errors.h"

using namespace nelsim;

bool nelsim::is_power_of_two(size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

size_t nelsim::qubit_count(size_t dim) {
    if (!is_power_of_two(dim)) {
        throw ValidationError("dimension " + std::to_string(dim) + " is not a power of two");
    }
    size_t k = 0;
    while (((size_t)1 << k) < dim) {
        k++;
    }
    return k;
}

Matrix nelsim::kron(const Matrix &a, const Matrix &b) {
    Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return r;
}

Vector nelsim::kron(const Vector &a, const Vector &b) {
    Vector r(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); i++) {
        r.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return r;
}

Matrix nelsim::outer(const Vector &v) {
    return v * v.adjoint();
}

double nelsim::hermitian_defect(const Matrix &m) {
    if (m.rows() != m.cols()) {
        return INFINITY;
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

RealVector nelsim::hermitian_eigenvalues(const Matrix &m) {
    Matrix h = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

double nelsim::min_eigenvalue(const Matrix &m) {
    return hermitian_eigenvalues(m)(0);
}

Complex nelsim::trace_product(const Matrix &a, const Matrix &b) {
    return (a.array() * b.transpose().array()).sum();
}

double nelsim::max_abs_diff(const Matrix &a, const Matrix &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

const Matrix &nelsim::pauli(size_t k) {
    static const std::array<Matrix, 4> paulis = [] {
        std::array<Matrix, 4> p;
        for (auto &m : p) {
            m = Matrix::Zero(2, 2);
        }
        p[0](0, 0) = 1;
        p[0](1, 1) = 1;
        p[1](0, 1) = 1;
        p[1](1, 0) = 1;
        p[2](0, 1) = Complex(0, -1);
        p[2](1, 0) = Complex(0, 1);
        p[3](0, 0) = 1;
        p[3](1, 1) = -1;
        return p;
    }();
    return paulis.at(k);
}
