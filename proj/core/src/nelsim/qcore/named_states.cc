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

#include "nelsim/qcore/named_states.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "nelsim/qcore/errors.h"
#include "nelsim/qcore/ops.h"

using namespace nelsim;

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t k = s.find(sep, start);
        if (k == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            return out;
        }
        out.emplace_back(s.substr(start, k - start));
        start = k + 1;
    }
}

double parse_unit_parameter(const std::string &text, std::string_view what) {
    size_t used = 0;
    double v;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        throw ValidationError("bad " + std::string(what) + " parameter '" + text + "'");
    }
    if (used != text.size()) {
        throw ValidationError("bad " + std::string(what) + " parameter '" + text + "'");
    }
    if (!(v >= 0 && v <= 1)) {
        throw ValidationError(std::string(what) + " parameter " + text + " is outside [0, 1]");
    }
    return v;
}

void check_unit(double v, std::string_view what) {
    if (!(v >= 0 && v <= 1)) {
        throw ValidationError(std::string(what) + " parameter " + std::to_string(v) + " is outside [0, 1]");
    }
}

Matrix identity(Eigen::Index d) {
    return Matrix::Identity(d, d);
}

}  // namespace

PureState nelsim::six_state_ket(size_t s) {
    const double h = std::numbers::sqrt2 / 2;
    Vector v(2);
    switch (s) {
        case 0:
            v << 1, 0;
            break;
        case 1:
            v << 0, 1;
            break;
        case 2:
            v << h, h;
            break;
        case 3:
            v << h, -h;
            break;
        case 4:
            v << h, Complex(0, h);
            break;
        case 5:
            v << h, Complex(0, -h);
            break;
        default:
            throw ValidationError("six-state index " + std::to_string(s) + " is outside 0..5");
    }
    return PureState::from_amplitudes(std::move(v));
}

DensityMatrix nelsim::six_state(size_t s) {
    return DensityMatrix::from_pure(six_state_ket(s));
}

PureState nelsim::bell_ket(BellState which) {
    const double h = std::numbers::sqrt2 / 2;
    Vector v = Vector::Zero(4);
    switch (which) {
        case BellState::PhiPlus:
            v << h, 0, 0, h;
            break;
        case BellState::PhiMinus:
            v << h, 0, 0, -h;
            break;
        case BellState::PsiPlus:
            v << 0, h, h, 0;
            break;
        case BellState::PsiMinus:
            v << 0, h, -h, 0;
            break;
    }
    return PureState::from_amplitudes(std::move(v));
}

DensityMatrix nelsim::bell(BellState which) {
    return DensityMatrix::from_pure(bell_ket(which));
}

DensityMatrix nelsim::werner(double p) {
    check_unit(p, "werner");
    Matrix m = p * bell_ket(BellState::PsiMinus).projector() + (1 - p) / 4 * identity(4);
    return DensityMatrix::from_matrix(m);
}

static Matrix rho0_matrix(double q) {
    Matrix zero = Matrix::Zero(2, 2);
    zero(0, 0) = 1;
    return q * bell_ket(BellState::PsiMinus).projector() + (1 - q) * kron(zero, identity(2) / 2.0);
}

DensityMatrix nelsim::rho0(double q) {
    check_unit(q, "rho0");
    return DensityMatrix::from_matrix(rho0_matrix(q));
}

DensityMatrix nelsim::hirsch(double q, const DensityMatrix &sigma_a, const DensityMatrix &sigma_b) {
    check_unit(q, "hirsch");
    if (sigma_a.dim() != 2 || sigma_b.dim() != 2) {
        throw ValidationError("hirsch needs single-qubit sigma_A and sigma_B");
    }
    Matrix r0 = rho0_matrix(q);
    Matrix ra = partial_trace(r0, KEEP_A);
    Matrix rb = partial_trace(r0, KEEP_B);
    const Matrix &sa = sigma_a.matrix();
    const Matrix &sb = sigma_b.matrix();
    Matrix m = (r0 + kron(ra, sb) + kron(sa, rb) + kron(sa, sb)) / 4.0;
    return DensityMatrix::from_matrix(m);
}

DensityMatrix nelsim::qubit_state(std::string_view token) {
    static const std::vector<std::pair<std::string_view, size_t>> names = {
        {"ket0", 0}, {"ket1", 1}, {"plus", 2}, {"minus", 3}, {"plus_i", 4}, {"minus_i", 5},
        {"s0", 0},   {"s1", 1},   {"s2", 2},   {"s3", 3},    {"s4", 4},     {"s5", 5},
    };
    for (const auto &[name, index] : names) {
        if (token == name) {
            return six_state(index);
        }
    }
    if (token == "mixed") {
        return DensityMatrix::maximally_mixed(2);
    }
    throw ValidationError("unknown single-qubit state token '" + std::string(token) + "'");
}

DensityMatrix nelsim::named_state(std::string_view spec) {
    auto parts = split(spec, ':');
    const std::string &kind = parts[0];
    auto expect = [&](size_t n) {
        if (parts.size() != n) {
            throw ValidationError("state spec '" + std::string(spec) + "' has the wrong number of fields");
        }
    };
    if (kind == "werner") {
        expect(2);
        return werner(parse_unit_parameter(parts[1], "werner"));
    }
    if (kind == "rho0") {
        expect(2);
        return rho0(parse_unit_parameter(parts[1], "rho0"));
    }
    if (kind == "hirsch") {
        expect(4);
        return hirsch(parse_unit_parameter(parts[1], "hirsch"), qubit_state(parts[2]), qubit_state(parts[3]));
    }
    if (kind == "bell") {
        expect(2);
        const std::string &w = parts[1];
        if (w == "phi+") {
            return bell(BellState::PhiPlus);
        }
        if (w == "phi-") {
            return bell(BellState::PhiMinus);
        }
        if (w == "psi+") {
            return bell(BellState::PsiPlus);
        }
        if (w == "psi-") {
            return bell(BellState::PsiMinus);
        }
        throw ValidationError("unknown Bell state '" + w + "'");
    }
    if (kind == "sixstate") {
        expect(2);
        size_t used = 0;
        int s = -1;
        try {
            s = std::stoi(parts[1], &used);
        } catch (const std::exception &) {
        }
        if (used != parts[1].size() || s < 0 || s > 5) {
            throw ValidationError("sixstate index '" + parts[1] + "' is outside 0..5");
        }
        return six_state((size_t)s);
    }
    if (kind == "product") {
        expect(3);
        return DensityMatrix::from_matrix(kron(qubit_state(parts[1]).matrix(), qubit_state(parts[2]).matrix()));
    }
    if (kind == "mixed") {
        expect(1);
        return DensityMatrix::maximally_mixed(4);
    }
    throw ValidationError("unknown state spec '" + std::string(spec) + "'");
}
