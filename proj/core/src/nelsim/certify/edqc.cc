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


#include "nelsim/certify/edqc.h"

#include <cmath>

#include "nelsim/qcore/errors.h"
#include "nelsim/qcore/linalg.h"
#include "nelsim/qcore/named_states.h"
#include "nelsim/qcore/ops.h"
#include "nelsim/qcore/parallel.h"
#include "nelsim/qcore/povm.h"

using namespace nelsim;

namespace {

constexpr uint64_t EDQC_DOMAIN = 0xed9c;
constexpr uint64_t EDQC_CHUNK = 1 << 16;

void check_input(size_t s) {
    if (s >= EDQC_INPUTS) {
        throw ValidationError("EDQC input must be a 3-bit value");
    }
}

double clamp01(double x) {
    return std::clamp(x, 0.0, 1.0);
}

/// Number of inputs naming the same six-state index as s.
double multiplicity(size_t s) {
    return BellTestCircuit::state_index(s) < 2 ? 2.0 : 1.0;
}

/// The effective "b = 1" element on the auxiliary qubit: Tr_input[phi+ (tau_s (x) I)].
const Matrix &answer_one_element(size_t s) {
    static const std::array<Matrix, EDQC_INPUTS> elements = [] {
        std::array<Matrix, EDQC_INPUTS> out;
        Matrix phi = bell(BellState::PhiPlus).matrix();
        for (size_t k = 0; k < EDQC_INPUTS; k++) {
            Matrix tau = six_state(BellTestCircuit::state_index(k)).matrix();
            out[k] = partial_trace(Matrix(phi * kron(tau, Matrix::Identity(2, 2))), 0b10);
        }
        return out;
    }();
    return elements[s];
}

DensityMatrix transpose_state(size_t s) {
    return DensityMatrix::from_matrix(six_state(BellTestCircuit::state_index(s)).matrix().transpose());
}

}  // namespace

size_t BellTestCircuit::state_index(size_t s) {
    check_input(s);
    return s < 6 ? s : s - 6;
}

nlohmann::json BellTestCircuit::to_json() {
    nlohmann::json j;
    j["qubits"] = qubits;
    j["registers"] = {{"input", input_qubits}, {"auxiliary", 1}};
    nlohmann::json map = nlohmann::json::array();
    for (size_t s = 0; s < EDQC_INPUTS; s++) {
        map.push_back(state_index(s));
    }
    j["input_to_six_state"] = map;
    j["output"] = "phi+ projection of (prepared qubit, auxiliary qubit)";
    return j;
}

double nelsim::edqc_circuit_semantics(size_t s, const DensityMatrix &rho_q) {
    check_input(s);
    if (rho_q.dim() != 2) {
        throw ValidationError("auxiliary register must be a single qubit");
    }
    Matrix phi = bell(BellState::PhiPlus).matrix();
    Matrix tau = six_state(BellTestCircuit::state_index(s)).matrix();
    return clamp01(trace_product(phi, kron(tau, rho_q.matrix())).real());
}

EightTable nelsim::edqc_beta(const SixTable &beta) {
    EightTable out{};
    for (size_t s = 0; s < EDQC_INPUTS; s++) {
        for (size_t t = 0; t < EDQC_INPUTS; t++) {
            out[s][t] = beta[BellTestCircuit::state_index(s)][BellTestCircuit::state_index(t)] /
                        (multiplicity(s) * multiplicity(t));
        }
    }
    return out;
}

Matrix nelsim::reconstruct_edqc_witness(const EightTable &beta8) {
    Matrix w = Matrix::Zero(4, 4);
    for (size_t s = 0; s < EDQC_INPUTS; s++) {
        for (size_t t = 0; t < EDQC_INPUTS; t++) {
            w += beta8[s][t] * kron(Matrix(six_state(BellTestCircuit::state_index(s)).matrix().transpose()),
                                    Matrix(six_state(BellTestCircuit::state_index(t)).matrix().transpose()));
        }
    }
    return w;
}

EdqcInvocation IdealEdqc::laws(size_t s, const DensityMatrix &rho_qe) {
    check_input(s);
    if (rho_qe.dim() != 4) {
        throw ValidationError("EDQC invocation takes an auxiliary qubit and a 1-qubit environment");
    }
    const Matrix &one = answer_one_element(s);
    std::array<Matrix, 2> element{Matrix(Matrix::Identity(2, 2) - one), one};
    EdqcInvocation inv;
    for (int b = 0; b < 2; b++) {
        Matrix env = partial_trace(Matrix(kron(element[b], Matrix::Identity(2, 2)) * rho_qe.matrix()), KEEP_B);
        double p = clamp01(env.trace().real());
        inv.probability[b] = p;
        if (p > 0) {
            Matrix e = env / p;
            inv.environment[b] = DensityMatrix::from_matrix(Matrix((e + e.adjoint()) / 2));
        }
    }
    return inv;
}

EdqcInvocation IdealEdqc::invoke(size_t s, const DensityMatrix &rho_qe, Rng &rng) {
    EdqcInvocation inv = laws(s, rho_qe);
    inv.b = rng.bernoulli(inv.probability[1]) ? 1 : 0;
    return inv;
}

EdqcStrategy EdqcStrategy::use_share() {
    return EdqcStrategy{"use-share", [](const DensityMatrix &share, size_t) { return share; }, false};
}

EdqcStrategy EdqcStrategy::fixed(std::string name, const DensityMatrix &rho) {
    if (rho.dim() != 2) {
        throw ValidationError("fixed auxiliary state must be a single qubit");
    }
    return EdqcStrategy{std::move(name), [rho](const DensityMatrix &, size_t) { return rho; }, false};
}

EdqcStrategy EdqcStrategy::input_dependent_bits(std::string name, const std::array<int, EDQC_INPUTS> &bits) {
    auto rule = [bits](const DensityMatrix &, size_t s) {
        DensityMatrix t = transpose_state(s);
        if (bits[s]) {
            return t;
        }
        return DensityMatrix::from_matrix(Matrix(Matrix::Identity(2, 2) - t.matrix()));
    };
    return EdqcStrategy{std::move(name), rule, true};
}

CheatingPlan nelsim::plan_input_dependent_cheat(const EightTable &beta8) {
    // Bit x gives P[b = 1] = x / 2, so the score is (1/4) sum beta8[s][t] x_A(s) x_B(t).
    CheatingPlan best;
    best.score = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << EDQC_INPUTS); mask++) {
        double value = 0;
        std::array<int, EDQC_INPUTS> bob{};
        for (size_t t = 0; t < EDQC_INPUTS; t++) {
            double c = 0;
            for (size_t s = 0; s < EDQC_INPUTS; s++) {
                c += ((mask >> s) & 1) ? beta8[s][t] : 0.0;
            }
            if (c < 0) {
                bob[t] = 1;
                value += c;
            }
        }
        if (value / 4 < best.score) {
            best.score = value / 4;
            for (size_t s = 0; s < EDQC_INPUTS; s++) {
                best.alice[s] = (int)((mask >> s) & 1);
            }
            best.bob = bob;
        }
    }
    return best;
}

void EdqcReport::add(size_t s, size_t t, int a, int b) {
    counts[s][t]++;
    ones[s][t] += (a == 1 && b == 1) ? 1 : 0;
    rounds++;
}

void EdqcReport::merge(const EdqcReport &other) {
    for (size_t s = 0; s < EDQC_INPUTS; s++) {
        for (size_t t = 0; t < EDQC_INPUTS; t++) {
            counts[s][t] += other.counts[s][t];
            ones[s][t] += other.ones[s][t];
        }
    }
    rounds += other.rounds;
}

void EdqcReport::finalize(const EightTable &beta8) {
    score = 0;
    for (size_t s = 0; s < EDQC_INPUTS; s++) {
        for (size_t t = 0; t < EDQC_INPUTS; t++) {
            if (counts[s][t]) {
                score += beta8[s][t] * (double)ones[s][t] / (double)counts[s][t];
            }
        }
    }
    verdict = score < 0 ? Verdict::Entangled : Verdict::NotEntangled;
}

nlohmann::json EdqcReport::to_json() const {
    nlohmann::json j;
    j["rounds"] = rounds;
    j["counts"] = counts;
    j["ones"] = ones;
    j["score"] = score;
    j["exact_score"] = exact_score;
    j["verdict"] = verdict_name(verdict);
    return j;
}

namespace {

/// Alice's output law per input and Bob's output law per (input, Alice's bit, his input).
struct HonestLaws {
    std::array<double, EDQC_INPUTS> alice{};
    std::array<std::array<std::array<double, EDQC_INPUTS>, 2>, EDQC_INPUTS> bob{};
};

HonestLaws honest_laws(const DensityMatrix &rho) {
    HonestLaws laws;
    for (size_t s = 0; s < EDQC_INPUTS; s++) {
        EdqcInvocation inv = IdealEdqc::laws(s, rho);
        laws.alice[s] = inv.probability[1];
        for (int a = 0; a < 2; a++) {
            for (size_t t = 0; t < EDQC_INPUTS; t++) {
                laws.bob[s][(size_t)a][t] = edqc_circuit_semantics(t, inv.environment[(size_t)a]);
            }
        }
    }
    return laws;
}

using PlayerLaw = std::array<double, EDQC_INPUTS>;

PlayerLaw strategy_law(const EdqcStrategy &strategy, const DensityMatrix &share) {
    PlayerLaw law{};
    for (size_t s = 0; s < EDQC_INPUTS; s++) {
        law[s] = edqc_circuit_semantics(s, strategy.rho_q(share, s));
    }
    return law;
}

}  // namespace

EightTable nelsim::edqc_honest_table(const DensityMatrix &rho) {
    HonestLaws laws = honest_laws(rho);
    EightTable table{};
    for (size_t s = 0; s < EDQC_INPUTS; s++) {
        for (size_t t = 0; t < EDQC_INPUTS; t++) {
            table[s][t] = laws.alice[s] * laws.bob[s][1][t];
        }
    }
    return table;
}

EightTable nelsim::edqc_separable_table(const SeparableSource &source, const EdqcStrategy &a,
                                        const EdqcStrategy &b) {
    EightTable table{};
    for (const auto &c : source.components()) {
        PlayerLaw la = strategy_law(a, c.sigma_a), lb = strategy_law(b, c.sigma_b);
        for (size_t s = 0; s < EDQC_INPUTS; s++) {
            for (size_t t = 0; t < EDQC_INPUTS; t++) {
                table[s][t] += c.weight * la[s] * lb[t];
            }
        }
    }
    return table;
}

EdqcReport nelsim::run_edqc_game(const SharedResource &resource, const Witness &witness,
                                 const EdqcGameOptions &options, const EdqcStrategy &alice, const EdqcStrategy &bob) {
    EightTable beta8 = edqc_beta(witness.beta);
    uint64_t rounds = options.rounds ? options.rounds : repetitions(options.delta, witness.eta, witness.beta);
    EightTable exact{};
    std::function<void(Rng &, EdqcReport &)> play;

    HonestLaws honest;
    std::vector<double> weights;
    std::vector<std::pair<PlayerLaw, PlayerLaw>> component_laws;
    if (const auto *rho = std::get_if<DensityMatrix>(&resource)) {
        if (rho->dim() != 4) {
            throw ValidationError("shared resource must be a two-qubit state");
        }
        honest = honest_laws(*rho);
        exact = edqc_honest_table(*rho);
        play = [&honest](Rng &rng, EdqcReport &acc) {
            size_t s = (size_t)rng.below(EDQC_INPUTS), t = (size_t)rng.below(EDQC_INPUTS);
            int a = rng.bernoulli(honest.alice[s]) ? 1 : 0;
            int b = rng.bernoulli(honest.bob[s][(size_t)a][t]) ? 1 : 0;
            acc.add(s, t, a, b);
        };
    } else {
        const auto &source = std::get<SeparableSource>(resource);
        weights = source.weights();
        for (const auto &c : source.components()) {
            component_laws.emplace_back(strategy_law(alice, c.sigma_a), strategy_law(bob, c.sigma_b));
        }
        exact = edqc_separable_table(source, alice, bob);
        play = [&weights, &component_laws](Rng &rng, EdqcReport &acc) {
            size_t k = weights.size() == 1 ? 0 : sample_index(weights, rng);
            size_t s = (size_t)rng.below(EDQC_INPUTS), t = (size_t)rng.below(EDQC_INPUTS);
            int a = rng.bernoulli(component_laws[k].first[s]) ? 1 : 0;
            int b = rng.bernoulli(component_laws[k].second[t]) ? 1 : 0;
            acc.add(s, t, a, b);
        };
    }
    EdqcReport report = run_chunked<EdqcReport>(
        rounds, EDQC_CHUNK, options.seed, EDQC_DOMAIN, options.workers,
        [&](Rng &rng, uint64_t count, EdqcReport &acc) {
            for (uint64_t i = 0; i < count; i++) {
                play(rng, acc);
            }
        },
        [](EdqcReport &total, const EdqcReport &part) { total.merge(part); });
    report.finalize(beta8);
    report.exact_score = 0;
    for (size_t s = 0; s < EDQC_INPUTS; s++) {
        for (size_t t = 0; t < EDQC_INPUTS; t++) {
            report.exact_score += beta8[s][t] * exact[s][t];
        }
    }
    return report;
}
