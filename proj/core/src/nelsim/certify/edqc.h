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


#ifndef NELSIM_CERTIFY_EDQC_H
#define NELSIM_CERTIFY_EDQC_H

#include <array>
#include <cstdint>
#include <functional>
#include <nlohmann/json.hpp>
#include <string>

#include "nelsim/games/sqg.h"
#include "nelsim/qcore/rng.h"
#include "nelsim/witness/witness.h"

namespace nelsim {

constexpr size_t EDQC_INPUTS = 8;
using EightTable = std::array<std::array<double, EDQC_INPUTS>, EDQC_INPUTS>;

/// The delegated 4-qubit circuit: a 3-bit input register selects a six-state qubit (inputs 6 and 7 repeat
/// states 0 and 1), which is Bell-measured against the 1-qubit auxiliary register; b = 1 on phi+.
struct BellTestCircuit {
    static constexpr unsigned qubits = 4;
    static constexpr unsigned input_qubits = 3;

    static size_t state_index(size_t s);
    static nlohmann::json to_json();
};

/// P[b = 1] = Tr[phi+ (tau_s (x) rho_q)].
double edqc_circuit_semantics(size_t s, const DensityMatrix &rho_q);

/// beta over 8 x 8 inputs: each six-state coefficient is split evenly over the inputs naming the same pair.
EightTable edqc_beta(const SixTable &beta);
/// sum_{s,t} beta8[s][t] tau_s^T (x) omega_t^T.
Matrix reconstruct_edqc_witness(const EightTable &beta8);

struct EdqcInvocation {
    int b = 0;
    std::array<double, 2> probability{};
    /// Environment state conditioned on each output bit (maximally mixed for an impossible bit).
    std::array<DensityMatrix, 2> environment{DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(2)};
};

/// Ideal delegation: the output bit has the circuit's law on the auxiliary register and the environment is left in
/// the conditioned post-measurement state.
class IdealEdqc {
   public:
    /// rho_qe has the auxiliary qubit first and a 1-qubit environment second.
    static EdqcInvocation laws(size_t s, const DensityMatrix &rho_qe);
    static EdqcInvocation invoke(size_t s, const DensityMatrix &rho_qe, Rng &rng);
};

/// A separable-mode player's auxiliary state as a function of its local share and (for cheating players) the input.
struct EdqcStrategy {
    std::string name;
    std::function<DensityMatrix(const DensityMatrix &share, size_t s)> rho_q;
    bool input_dependent = false;

    /// rho_Q = local share.
    static EdqcStrategy use_share();
    static EdqcStrategy fixed(std::string name, const DensityMatrix &rho);
    /// rho_Q = tau_s^T when the bit for s is set, else I - tau_s^T; breaks the single-rho_Q soundness shape.
    static EdqcStrategy input_dependent_bits(std::string name, const std::array<int, EDQC_INPUTS> &bits);
};

struct CheatingPlan {
    std::array<int, EDQC_INPUTS> alice{};
    std::array<int, EDQC_INPUTS> bob{};
    /// Exact score of the plan.
    double score = 0;
};
/// Minimizes the exact score over input-dependent strategies of the `input_dependent_bits` form.
CheatingPlan plan_input_dependent_cheat(const EightTable &beta8);

struct EdqcReport {
    uint64_t rounds = 0;
    std::array<std::array<uint64_t, EDQC_INPUTS>, EDQC_INPUTS> counts{};
    std::array<std::array<uint64_t, EDQC_INPUTS>, EDQC_INPUTS> ones{};
    double score = 0;
    double exact_score = 0;
    Verdict verdict = Verdict::NotEntangled;

    void add(size_t s, size_t t, int a, int b);
    void merge(const EdqcReport &other);
    void finalize(const EightTable &beta8);
    nlohmann::json to_json() const;
};

struct EdqcGameOptions {
    double delta = 0.2;
    uint64_t seed = 0;
    unsigned workers = 1;
    /// Overrides the repetition formula when nonzero.
    uint64_t rounds = 0;
};

/// Exact P[b_A = 1, b_B = 1 | s, t] for honest players sharing rho, Alice's delegation first.
EightTable edqc_honest_table(const DensityMatrix &rho);
/// Exact table for separable-mode players.
EightTable edqc_separable_table(const SeparableSource &source, const EdqcStrategy &a, const EdqcStrategy &b);

/// Honest players when the resource is a state; declared strategies on a separable source otherwise.
EdqcReport run_edqc_game(const SharedResource &resource, const Witness &witness, const EdqcGameOptions &options,
                         const EdqcStrategy &alice = EdqcStrategy::use_share(),
                         const EdqcStrategy &bob = EdqcStrategy::use_share());

}  // namespace nelsim

#endif
