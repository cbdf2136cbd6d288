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

#ifndef NELSIM_QCORE_POVM_H
#define NELSIM_QCORE_POVM_H

#include <span>
#include <vector>

#include "nelsim/qcore/rng.h"
#include "nelsim/qcore/state.h"

namespace nelsim {

/// Positive semidefinite elements summing to the identity (each to TOLERANCE).
class Povm {
   public:
    static Povm from_elements(std::vector<Matrix> elements);
    /// {|k><k|} on the given dimension.
    static Povm computational(size_t dim);
    /// {P, I - P} for a rank-one projector P = |v><v|.
    static Povm binary_projective(const Vector &ket);

    size_t size() const {
        return elements_.size();
    }
    size_t dim() const {
        return (size_t)elements_.front().rows();
    }
    const std::vector<Matrix> &elements() const {
        return elements_;
    }
    const Matrix &operator[](size_t k) const {
        return elements_[k];
    }

   private:
    explicit Povm(std::vector<Matrix> elements) : elements_(std::move(elements)) {
    }
    std::vector<Matrix> elements_;
};

/// One weighted rank-one term weight * |ket><ket| of a fine-grained POVM.
struct FineElement {
    double weight;
    Vector ket;
    size_t coarse;

    Matrix projector() const {
        return outer(ket);
    }
    Matrix element() const {
        return weight * outer(ket);
    }
};

/// Rank-one refinement of a POVM together with the fine-to-coarse outcome map.
struct FineGrainedPovm {
    size_t dim = 0;
    size_t num_coarse = 0;
    std::vector<FineElement> elements;

    size_t size() const {
        return elements.size();
    }
    Povm as_povm() const;
    /// Sum of weight * projector (the identity, for a valid refinement).
    Matrix resolution() const;
};

/// Eigendecomposes every element, drops eigenvalues below 1e-12, and orders the rank-one terms deterministically.
FineGrainedPovm fine_grain(const Povm &povm);

/// Born probabilities Tr[A_i rho], clamped at zero.
std::vector<double> outcome_probabilities(const DensityMatrix &rho, const Povm &povm);
size_t born_sample(const DensityMatrix &rho, const Povm &povm, Rng &rng);

/// Inverse-CDF index for a probability vector and a uniform u in [0, 1); the last positive entry absorbs rounding.
size_t sample_index(std::span<const double> probs, double u);
size_t sample_index(std::span<const double> probs, Rng &rng);

/// Random qubit POVM with `outcomes` rank-one elements S^(-1/2) v v^dagger S^(-1/2).
Povm random_rank_one_qubit_povm(size_t outcomes, Rng &rng);

}  // namespace nelsim

#endif
