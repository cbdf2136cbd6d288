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

#include "nelsim/qcore/povm.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "nelsim/qcore/errors.h"

using namespace nelsim;

Povm Povm::from_elements(std::vector<Matrix> elements) {
    if (elements.empty()) {
        throw ValidationError("POVM needs at least one element");
    }
    Eigen::Index d = elements.front().rows();
    if (!is_power_of_two((size_t)d)) {
        throw ValidationError("POVM dimension is not a power of two");
    }
    Matrix sum = Matrix::Zero(d, d);
    for (size_t k = 0; k < elements.size(); k++) {
        const Matrix &e = elements[k];
        if (e.rows() != d || e.cols() != d) {
            throw ValidationError("POVM elements have mismatched dimensions");
        }
        if (!all_finite(e)) {
            throw ValidationError("POVM element " + std::to_string(k) + " has a non-finite entry");
        }
        if (hermitian_defect(e) > TOLERANCE) {
            throw ValidationError("POVM element " + std::to_string(k) + " is not Hermitian");
        }
        double lo = min_eigenvalue(e);
        if (lo < -TOLERANCE) {
            throw NotPsdError(
                "POVM element " + std::to_string(k) + " has negative eigenvalue " + std::to_string(lo), lo);
        }
        sum += e;
    }
    double defect = max_abs_diff(sum, Matrix::Identity(d, d));
    if (defect > TOLERANCE) {
        throw ValidationError("POVM elements do not sum to identity (defect " + std::to_string(defect) + ")");
    }
    return Povm(std::move(elements));
}

Povm Povm::computational(size_t dim) {
    std::vector<Matrix> es;
    for (size_t k = 0; k < dim; k++) {
        Matrix e = Matrix::Zero((Eigen::Index)dim, (Eigen::Index)dim);
        e((Eigen::Index)k, (Eigen::Index)k) = 1;
        es.push_back(std::move(e));
    }
    return from_elements(std::move(es));
}

Povm Povm::binary_projective(const Vector &ket) {
    Vector v = ket / ket.norm();
    Matrix p = outer(v);
    Matrix id = Matrix::Identity(v.size(), v.size());
    return from_elements({p, id - p});
}

Povm FineGrainedPovm::as_povm() const {
    std::vector<Matrix> es(num_coarse, Matrix::Zero((Eigen::Index)dim, (Eigen::Index)dim));
    for (const auto &e : elements) {
        es[e.coarse] += e.element();
    }
    return Povm::from_elements(std::move(es));
}

Matrix FineGrainedPovm::resolution() const {
    Matrix sum = Matrix::Zero((Eigen::Index)dim, (Eigen::Index)dim);
    for (const auto &e : elements) {
        sum += e.element();
    }
    return sum;
}

namespace {

constexpr double DROP_BELOW = 1e-12;
constexpr double ROUNDING = 1e9;

double rounded(double x) {
    double r = std::round(x * ROUNDING) / ROUNDING;
    return r == 0 ? 0.0 : r;
}

/// Rotates the global phase so the first non-negligible component is real positive.
void canonicalize_phase(Vector &v) {
    for (Eigen::Index k = 0; k < v.size(); k++) {
        double mag = std::abs(v(k));
        if (mag > 1e-12) {
            v *= std::conj(v(k)) / mag;
            v(k) = Complex(mag, 0);
            return;
        }
    }
}

bool ket_less(const Vector &a, const Vector &b) {
    for (Eigen::Index k = 0; k < a.size(); k++) {
        auto ka = std::make_tuple(rounded(a(k).real()), rounded(a(k).imag()));
        auto kb = std::make_tuple(rounded(b(k).real()), rounded(b(k).imag()));
        if (ka != kb) {
            return ka > kb;
        }
    }
    return false;
}

}  // namespace

FineGrainedPovm nelsim::fine_grain(const Povm &povm) {
    FineGrainedPovm out;
    out.dim = povm.dim();
    out.num_coarse = povm.size();
    for (size_t k = 0; k < povm.size(); k++) {
        Matrix h = (povm[k] + povm[k].adjoint()) / 2.0;
        Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
        const RealVector &vals = solver.eigenvalues();
        if (vals(0) < -TOLERANCE) {
            throw NotPsdError(
                "POVM element " + std::to_string(k) + " has negative eigenvalue " + std::to_string(vals(0)), vals(0));
        }
        std::vector<FineElement> terms;
        for (Eigen::Index j = 0; j < vals.size(); j++) {
            if (vals(j) < DROP_BELOW) {
                continue;
            }
            Vector v = solver.eigenvectors().col(j);
            v /= v.norm();
            canonicalize_phase(v);
            terms.push_back({std::min(vals(j), 1.0), std::move(v), k});
        }
        std::stable_sort(terms.begin(), terms.end(), [](const FineElement &a, const FineElement &b) {
            double ra = rounded(a.weight);
            double rb = rounded(b.weight);
            if (ra != rb) {
                return ra > rb;
            }
            return ket_less(a.ket, b.ket);
        });
        for (auto &t : terms) {
            out.elements.push_back(std::move(t));
        }
    }
    return out;
}

std::vector<double> nelsim::outcome_probabilities(const DensityMatrix &rho, const Povm &povm) {
    if (rho.dim() != povm.dim()) {
        throw ValidationError(
            "state dimension " + std::to_string(rho.dim()) + " does not match POVM dimension " +
            std::to_string(povm.dim()));
    }
    std::vector<double> probs;
    probs.reserve(povm.size());
    for (const auto &e : povm.elements()) {
        probs.push_back(std::max(0.0, trace_product(e, rho.matrix()).real()));
    }
    return probs;
}

size_t nelsim::born_sample(const DensityMatrix &rho, const Povm &povm, Rng &rng) {
    auto probs = outcome_probabilities(rho, povm);
    return sample_index(probs, rng);
}

size_t nelsim::sample_index(std::span<const double> probs, double u) {
    double total = 0;
    for (double p : probs) {
        total += p;
    }
    double target = u * total;
    double acc = 0;
    size_t last_positive = 0;
    for (size_t k = 0; k < probs.size(); k++) {
        if (probs[k] <= 0) {
            continue;
        }
        last_positive = k;
        acc += probs[k];
        if (target < acc) {
            return k;
        }
    }
    return last_positive;
}

size_t nelsim::sample_index(std::span<const double> probs, Rng &rng) {
    return sample_index(probs, rng.uniform());
}

Povm nelsim::random_rank_one_qubit_povm(size_t outcomes, Rng &rng) {
    if (outcomes < 2) {
        throw ValidationError("random POVM needs at least two outcomes");
    }
    while (true) {
        std::vector<Vector> vs;
        Matrix s = Matrix::Zero(2, 2);
        for (size_t k = 0; k < outcomes; k++) {
            Vector v(2);
            v(0) = Complex(rng.gaussian(), rng.gaussian());
            v(1) = Complex(rng.gaussian(), rng.gaussian());
            s += outer(v);
            vs.push_back(std::move(v));
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
        if (solver.eigenvalues()(0) < 1e-3) {
            continue;
        }
        Matrix inv_sqrt = solver.operatorInverseSqrt();
        std::vector<Matrix> es;
        for (const auto &v : vs) {
            Vector w = inv_sqrt * v;
            es.push_back(outer(w));
        }
        Matrix sum = Matrix::Zero(2, 2);
        for (const auto &e : es) {
            sum += e;
        }
        // Remove the residual rounding so the sum passes the identity check exactly.
        es.back() += Matrix::Identity(2, 2) - sum;
        es.back() = (es.back() + es.back().adjoint()).eval() / 2.0;
        return Povm::from_elements(std::move(es));
    }
}
