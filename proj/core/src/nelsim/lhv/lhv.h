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


#ifndef NELSIM_LHV_LHV_H
#define NELSIM_LHV_LHV_H

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nelsim/qcore/extended.h"
#include "nelsim/qcore/povm.h"
#include "nelsim/qcore/rng.h"
#include "nelsim/qcore/state.h"

namespace nelsim {

/// Validated rank-one single-qubit projector |v><v|.
class Projector {
   public:
    static Projector from_ket(const Vector &ket);
    static Projector from_matrix(const Matrix &m);
    const Matrix &matrix() const {
        return m_;
    }
    /// <lambda| P |lambda>, real part.
    double expectation(const Vector &lambda) const;

   private:
    explicit Projector(Matrix m) : m_(std::move(m)) {
    }
    Matrix m_;
};

/// Fixed-point encoding of (Re a0, Im a0, Re a1, Im a1) with `frac_bits` fractional bits.
struct EncodedAmplitudes {
    unsigned frac_bits = 0;
    std::array<BigInt, 4> numerators;

    std::array<ExtendedReal, 4> components() const;
    Vector decode() const;
};

class SharedLambda {
   public:
    static SharedLambda exact(const PureState &lambda);
    static SharedLambda encode(const PureState &lambda, ScalarBackend backend, unsigned ell);
    static SharedLambda encode(const std::array<ExtendedReal, 4> &lambda, ScalarBackend backend, unsigned ell);

    const std::optional<PureState> &exact_state() const {
        return exact_;
    }
    const std::optional<EncodedAmplitudes> &encoded() const {
        return encoded_;
    }
    /// Extended-precision components of the exact draw, when it was made at extended precision.
    const std::optional<std::array<ExtendedReal, 4>> &exact_components() const {
        return exact_extended_;
    }
    ScalarBackend backend() const {
        return backend_;
    }
    unsigned ell() const {
        return ell_;
    }
    /// Exact amplitudes when present, decoded ones otherwise.
    Vector amplitudes() const;

   private:
    SharedLambda() = default;
    std::optional<PureState> exact_;
    std::optional<EncodedAmplitudes> encoded_;
    std::optional<std::array<ExtendedReal, 4>> exact_extended_;
    ScalarBackend backend_ = ScalarBackend::Float;
    unsigned ell_ = 0;
};

/// Fractional bits of the encoding: 40 * ell (float) or 100 * ell (extended).
unsigned encoding_bits(ScalarBackend backend, unsigned ell);
unsigned max_encoding_ell(ScalarBackend backend);
/// Per-component bound 2^-encoding_bits.
double encoding_bound(ScalarBackend backend, unsigned ell);
SharedLambda approx_haar(unsigned ell, ScalarBackend backend, Rng &rng);
/// Haar-random qubit ray (Re a0, Im a0, Re a1, Im a1) at extended precision; a0 is real and non-negative.
std::array<ExtendedReal, 4> haar_qubit_extended(Rng &rng);

struct OutcomePair {
    size_t a = 0;
    size_t b = 0;
};

/// a = 1 iff <l|P|l> < <l|(I-P)|l>; b ~ Ber(<l|Q|l>). Outcome 1 is the projector's own outcome.
OutcomePair werner_sim(const Projector &p, const Projector &q, const Vector &lambda, Rng &rng);

enum class MixMode { Werner, Rho0 };

/// Branch-mixed Werner model; the branch is drawn once from `rng`, which both parties share.
OutcomePair werner_mix_sim(MixMode mode, double q, const Projector &p, const Projector &qp, const Vector &lambda,
                           Rng &rng);

/// State whose statistics werner_mix_sim reproduces: werner(q) in Werner mode, and
/// 2q werner(1/2) + (1-3q)|0><0|(x)I/2 + q|-><-|(x)I/2 in Rho0 mode.
DensityMatrix werner_mix_realized_state(MixMode mode, double q);

struct HirschModel {
    double q = 0;
    DensityMatrix sigma_a = DensityMatrix::maximally_mixed(2);
    DensityMatrix sigma_b = DensityMatrix::maximally_mixed(2);

    static HirschModel make(double q, const DensityMatrix &sigma_a, const DensityMatrix &sigma_b);
    /// (1/4)[rho0 + rho0_A (x) sigma_B + sigma_A (x) rho0_B + sigma_A (x) sigma_B].
    DensityMatrix target_state() const;
    /// Hirsch-form state built on the mixture the branch rules actually realize.
    DensityMatrix realized_state() const;
};

/// Per-party POVM data shared by the ideal and circuit-backed simulations.
struct LocalResponse {
    std::vector<uint64_t> labels;
    std::vector<double> weights;
    std::vector<Vector> kets;
    std::array<std::vector<double>, 2> input_law;
    std::vector<double> sigma_law;
    std::vector<double> zero_overlap;
    std::vector<double> minus_overlap;

    static LocalResponse from_fine(const FineGrainedPovm &povm, const DensityMatrix &sigma);
    size_t size() const {
        return labels.size();
    }
};

struct SharedCoins {
    double branch = 0;
};

struct AliceCoins {
    double input = 0;
    double outcome = 0;
    double c2 = 0;
    double c3 = 0;
    double resample = 0;
};

struct BobCoins {
    double input = 0;
    double outcome = 0;
    double c1 = 0;
    double c2 = 0;
    double resample = 0;
};

SharedCoins draw_shared_coins(Rng &rng);
AliceCoins draw_alice_coins(Rng &rng);
BobCoins draw_bob_coins(Rng &rng);

/// Branch index: 0 werner, 1 |0> product, 2 |-> product (Alice); 0 werner, 1 coin (Bob).
size_t alice_branch(double q, double u);
size_t bob_branch(double q, double u);

struct PartyAnswer {
    size_t index = 0;
    size_t first_draw = 0;
    size_t branch = 0;
    bool kept = false;
};

/// First draw: a fair input bit c0, then an outcome from Tr[A_a |c0><c0|], which is distributed as eta_a / 2.
size_t draw_first_outcome(const LocalResponse &party, double input, double outcome);

PartyAnswer alice_sim_ideal(double q, const LocalResponse &party, const Vector &lambda, const SharedCoins &shared,
                            const AliceCoins &coins);
PartyAnswer bob_sim_ideal(double q, const LocalResponse &party, const Vector &lambda, const SharedCoins &shared,
                          const BobCoins &coins);

struct LhvOutcomeTable {
    size_t num_a = 0;
    size_t num_b = 0;
    uint64_t samples = 0;
    std::vector<uint64_t> counts;

    static LhvOutcomeTable make(size_t num_a, size_t num_b);
    void add(size_t a, size_t b);
    void merge(const LhvOutcomeTable &other);
    uint64_t count(size_t a, size_t b) const;
    double mc_prob(size_t a, size_t b) const;
    /// Binomial standard error sqrt(p(1-p)/N) at the given probability.
    double sigma(double p) const;
    std::vector<double> distribution() const;
    double total_variation(const std::vector<double> &exact) const;
    /// Largest |mc - exact| / sigma(exact) over cells with nonzero exact probability.
    double max_z(const std::vector<double> &exact) const;
    /// Columns a, b, count, exact_prob, mc_prob, sigma.
    std::string to_csv(const std::vector<double> &exact) const;
};

/// Tr[(A_a (x) B_b) rho] in row-major (a, b) order.
std::vector<double> joint_table(const DensityMatrix &rho, const Povm &povm_a, const Povm &povm_b);
/// Four-term product-of-traces form of the Hirsch target over fine-grained POVMs.
std::vector<double> hirsch_trace_formula(const HirschModel &model, const FineGrainedPovm &povm_a,
                                         const FineGrainedPovm &povm_b);

LhvOutcomeTable werner_mix_mc(MixMode mode, double q, const Projector &p, const Projector &qp, uint64_t samples,
                              uint64_t seed, unsigned workers);
/// Algorithms run over shared Haar draws; the table is indexed by coarse outcome.
LhvOutcomeTable hirsch_mc(const HirschModel &model, const FineGrainedPovm &povm_a, const FineGrainedPovm &povm_b,
                          uint64_t samples, uint64_t seed, unsigned workers);

constexpr uint64_t LHV_CHUNK = 65536;

}  // namespace nelsim

#endif
