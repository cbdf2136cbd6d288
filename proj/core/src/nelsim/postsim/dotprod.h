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


#ifndef NELSIM_POSTSIM_DOTPROD_H
#define NELSIM_POSTSIM_DOTPROD_H

#include <array>
#include <cstdint>

#include "nelsim/lhv/lhv.h"
#include "nelsim/postsim/circuit.h"
#include "nelsim/qcore/extended.h"
#include "nelsim/qcore/rng.h"

namespace nelsim {

/// Two copies of a real qubit state, CX(0->1), postselect qubit 1 on 0: first qubit ∝ (x0^2, x1^2).
PostState sub1_square(const Vector &state);
/// (|0> + beta|1>)/norm ⊗ state, CX(0->1), postselect qubit 1 on 0: first qubit ∝ (x0, beta x1).
PostState sub2_scale(double beta, const Vector &state);
/// (alpha|0> + beta|1>) ⊗ state, CH(0->1), postselect qubit 1 on 1.
PostState sub3_point(double alpha, double beta, const Vector &state);

Circuit sub1_circuit();
Circuit sub2_circuit();
Circuit sub3_circuit();

enum class Comparison { GreaterByMargin, Less };

const char *comparison_name(Comparison c);

/// Probability that a Hadamard-basis shot on the sub3 output at ratio r = beta/alpha reads |+>.
double sub3_plus_probability(double z1, double z2, double r);

struct Sub3Params {
    unsigned m = 0;
    /// Shots per sweep point; 0 selects 16m.
    unsigned shots = 0;

    unsigned shot_count() const {
        return shots == 0 ? 16 * m : shots;
    }
    /// Minimum |+> count for a point to pass.
    unsigned pass_count() const;
    int sweep_low() const {
        return -4 * (int)m;
    }
    int sweep_high() const {
        return 4 * (int)m;
    }
};

/// Probability that one sweep point with |+> probability p passes.
double sub3_point_pass_probability(const Sub3Params &params, double p);

/// Decides z1 > z2 by margin vs z1 < z2 with one binomial draw per sweep point (exactly thinned).
template <class T>
Comparison sub3_compare(const T &z1, const T &z2, const Sub3Params &params, Rng &rng);
/// Same law as `sub3_compare`, drawing every shot individually.
Comparison sub3_compare_shots(double z1, double z2, const Sub3Params &params, Rng &rng);
/// Exact probability that `sub3_compare` returns GreaterByMargin.
double sub3_greater_probability(double z1, double z2, const Sub3Params &params);

template <class T>
struct Sub4Result {
    T beta0 = T(0);
    bool ratio_infinite = false;
    unsigned comparisons = 0;
};

/// Searches beta0 with e1^2 ≈ beta0 * e2^2 to relative precision 2^-2ell.
template <class T>
Sub4Result<T> sub4_binary_search(const T &e1, const T &e2, unsigned ell, Rng &rng);

/// Complex target qubit (Re t0, Im t0, Re t1, Im t1) held at extended precision.
struct DotTarget {
    std::array<ExtendedReal, 4> components;

    static DotTarget from_vector(const Vector &v);
    static DotTarget from_lambda(const SharedLambda &lambda);
    static DotTarget ket0();
    static DotTarget minus();
    Vector to_vector() const;
};

struct DotProductOptions {
    unsigned ell = 16;
    ScalarBackend backend = ScalarBackend::Float;
};

struct DotProductResult {
    double value = 0;
    bool ratio_infinite = false;
    double beta0 = 0;
    int sign = 1;
    unsigned comparisons = 0;
};

unsigned max_dot_product_ell(ScalarBackend backend);

/// Estimates |<psi|target>|^2 for a real supply state psi.
DotProductResult dot_product_estimate(const Vector &psi, const DotTarget &target, const DotProductOptions &opts,
                                      Rng &rng);
/// Eigenvector of outcome `a` of `c` against `target`.
DotProductResult dot_product_with_eigenvector(uint64_t a, const Circuit &c, const DotTarget &target,
                                              const DotProductOptions &opts, Rng &rng);
DotProductResult dot_product_with_eigenvector(const EigenPair &pair, const DotTarget &target,
                                              const DotProductOptions &opts, Rng &rng);

}  // namespace nelsim

#endif
