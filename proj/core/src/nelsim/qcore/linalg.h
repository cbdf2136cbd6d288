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

#ifndef NELSIM_QCORE_LINALG_H
#define NELSIM_QCORE_LINALG_H

#include <Eigen/Dense>
#include <complex>
#include <cstddef>

namespace nelsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Entry tolerance used by every type invariant.
constexpr double TOLERANCE = 1e-10;

bool is_power_of_two(size_t n);
/// Number of qubits k with dim = 2^k; throws ValidationError otherwise.
size_t qubit_count(size_t dim);

Matrix kron(const Matrix &a, const Matrix &b);
Vector kron(const Vector &a, const Vector &b);
/// |v><v|.
Matrix outer(const Vector &v);

/// Largest entrywise |M - M^dagger|.
double hermitian_defect(const Matrix &m);
/// Ascending eigenvalues of the Hermitian part of m.
RealVector hermitian_eigenvalues(const Matrix &m);
double min_eigenvalue(const Matrix &m);
/// Tr[a b] without forming the product.
Complex trace_product(const Matrix &a, const Matrix &b);
/// Largest entrywise |a - b|.
double max_abs_diff(const Matrix &a, const Matrix &b);

/// Pauli matrices indexed I, X, Y, Z.
const Matrix &pauli(size_t k);

}  // namespace nelsim

#endif
