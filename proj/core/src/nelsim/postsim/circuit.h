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


#ifndef NELSIM_POSTSIM_CIRCUIT_H
#define NELSIM_POSTSIM_CIRCUIT_H

#include <array>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "nelsim/qcore/povm.h"
#include "nelsim/qcore/rng.h"
#include "nelsim/qcore/state.h"

namespace nelsim {

/// H and CCX form the core gate set; X, CX and controlled-H are convenience gates.
enum class GateKind { H, X, CX, CH, CCX, Post };

struct Gate {
    GateKind kind = GateKind::H;
    std::array<unsigned, 3> qubits{};
    int value = 0;

    unsigned arity() const;
    nlohmann::json to_json() const;
};

const char *gate_name(GateKind kind);

/// Qubit 0 is the most significant bit of a basis index.
class Circuit {
   public:
    explicit Circuit(unsigned qubits);
    static Circuit from_json(const nlohmann::json &j);
    nlohmann::json to_json() const;

    Circuit &h(unsigned q);
    Circuit &x(unsigned q);
    Circuit &cx(unsigned control, unsigned target);
    Circuit &ch(unsigned control, unsigned target);
    Circuit &ccx(unsigned c1, unsigned c2, unsigned target);
    Circuit &post(unsigned q, int value);
    Circuit &append(const Gate &g);
    Circuit &set_outputs(std::vector<unsigned> outputs);

    unsigned qubits() const {
        return qubits_;
    }
    size_t dim() const {
        return size_t{1} << qubits_;
    }
    const std::vector<Gate> &gates() const {
        return gates_;
    }
    /// Designated output qubits; all qubits in order when unset.
    std::vector<unsigned> outputs() const;
    bool has_postselection() const;
    bool uses_core_gate_set() const;
    /// Reversed gate list; every unitary gate here is self-inverse.
    Circuit inverse() const;
    /// Prepends X on `question_qubits[j]` for each set bit j of `question` (bit 0 = first listed qubit).
    Circuit with_question(uint64_t question, const std::vector<unsigned> &question_qubits) const;
    /// Output-qubit bits of a full outcome, first output qubit most significant.
    uint64_t answer(uint64_t outcome) const;
    size_t answer_count() const {
        return size_t{1} << outputs().size();
    }

   private:
    void check_qubit(unsigned q) const;
    unsigned qubits_;
    std::vector<Gate> gates_;
    std::optional<std::vector<unsigned>> outputs_;
};

struct PostState {
    Vector amplitudes;
    double success_probability = 1;
};

void apply_gate(const Gate &g, unsigned qubits, Vector &v);
PostState run_postselected(const Circuit &c, const Vector &input);
PostState run_postselected(const Circuit &c, const PureState &input);

struct SampledRun {
    PostState state;
    uint64_t attempts = 0;
};

/// Rejection sampling: every Postselect measures its qubit and the whole run restarts on a mismatch.
SampledRun run_postselected_sampled(const Circuit &c, const Vector &input, Rng &rng, uint64_t max_attempts);

/// State of qubit 0 when every other qubit sits in the basis state `rest`.
Vector first_qubit_amplitudes(const Vector &v, unsigned qubits, uint64_t rest = 0);

struct EigenPair {
    double eta = 0;
    std::optional<PureState> psi;

    bool is_zero() const {
        return !psi.has_value();
    }
};

/// Amplitudes below this magnitude in backward runs are double-precision cancellation residue.
constexpr double AMPLITUDE_SNAP = 1e-12;

EigenPair eigenvector_from_circuit(const Circuit &c, uint64_t outcome);
/// Every outcome's eigenpair, index = outcome bitstring.
std::vector<EigenPair> circuit_eigenpairs(const Circuit &c);
/// Fine-grained POVM {eta_a |psi_a><psi_a|} over outcomes with eta_a > 0; coarse label = outcome.
FineGrainedPovm circuit_povm(const Circuit &c);
/// All 2^s elements eta_a |psi_a><psi_a| (zero elements included).
Povm circuit_outcome_povm(const Circuit &c);
/// Outcome distribution of running c on rho (x) |0...0> and measuring every qubit.
std::vector<double> outcome_law(const Circuit &c, const DensityMatrix &first_qubit);

/// Random circuit over {H, CCX} (and X, CX when `convenience` is set).
Circuit random_circuit(unsigned qubits, unsigned gates, Rng &rng, bool convenience = false);

}  // namespace nelsim

#endif
