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

#ifndef NELSIM_GAMES_SQG_H
#define NELSIM_GAMES_SQG_H

#include <array>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <variant>
#include <vector>

#include "nelsim/qcore/rng.h"
#include "nelsim/witness/witness.h"

namespace nelsim {

enum class Verdict { Entangled, NotEntangled };
const char *verdict_name(Verdict v);

enum class ResourceMode { Entangled, Separable };

struct GameConfig {
    uint64_t rounds = 1;
    unsigned ell = 1;
    double delta = 0.5;
    ResourceMode mode = ResourceMode::Entangled;

    void validate() const;
};

struct SeparableComponent {
    double weight;
    DensityMatrix sigma_a;
    DensityMatrix sigma_b;
};

/// A convex mixture of product states; one component is drawn per round and handed to the players.
class SeparableSource {
   public:
    static SeparableSource from_components(std::vector<SeparableComponent> components);
    static SeparableSource product(const DensityMatrix &sigma_a, const DensityMatrix &sigma_b);

    const std::vector<SeparableComponent> &components() const {
        return components_;
    }
    std::vector<double> weights() const;
    Matrix joint_matrix() const;

   private:
    explicit SeparableSource(std::vector<SeparableComponent> components) : components_(std::move(components)) {
    }
    std::vector<SeparableComponent> components_;
};

/// What the two players share: an arbitrary two-qubit state, or a separable source sampled per round.
using SharedResource = std::variant<DensityMatrix, SeparableSource>;

/// A player's answer rule, declared as the "answer 1" element E of a two-outcome POVM {E, I - E} on
/// (quantum input (x) local share), input qubit first.
class SqgStrategy {
   public:
    static SqgStrategy from_operator(std::string name, const Matrix &answer_one);
    /// Projection of (input, share) onto |phi+>.
    static SqgStrategy honest();
    static SqgStrategy constant(int bit);
    /// Ignores the share and answers 1 when the input measured in the basis of `ket` lands on `ket`.
    static SqgStrategy input_projector(std::string name, const Vector &ket);

    const std::string &name() const {
        return name_;
    }
    const Matrix &answer_one() const {
        return e_;
    }
    /// Tr[E (tau (x) share)].
    double prob_one(const Matrix &tau, const Matrix &share) const;
    int answer(const DensityMatrix &tau, const DensityMatrix &share, Rng &rng) const;

   private:
    SqgStrategy(std::string name, Matrix e) : name_(std::move(name)), e_(std::move(e)) {
    }
    std::string name_;
    Matrix e_;
};

/// Tr[(|phi+><phi+|_A (x) |phi+><phi+|_B)(tau_s (x) rho (x) omega_t)] on qubits (input_A, rho_A, rho_B, input_B).
double honest_joint_prob(const DensityMatrix &rho, size_t s, size_t t);

/// Exact (P[a=1], P[b=1], P[a=1,b=1]) for the given strategies on a shared two-qubit state.
struct AnswerLaw {
    double p_a = 0;
    double p_b = 0;
    double p_ab = 0;
};
AnswerLaw joint_answer_law(
    const Matrix &rho, const SqgStrategy &a, const SqgStrategy &b, const Matrix &tau, const Matrix &omega);

/// Precomputed per-input answer laws; enough to play any number of rounds.
class GameTables {
   public:
    GameTables(const SharedResource &resource, const SqgStrategy &a, const SqgStrategy &b);

    ResourceMode mode() const {
        return mode_;
    }
    /// Exact P[a=1, b=1 | s, t] averaged over the resource.
    double p11(size_t s, size_t t) const;
    /// Exact ideal score sum beta[s][t] P[1,1|s,t].
    double exact_score(const SixTable &beta) const;

    /// Plays one round for inputs (s, t); the second player is sampled from its law conditioned on the first answer.
    std::pair<int, int> answer(size_t s, size_t t, Rng &rng) const;

   private:
    ResourceMode mode_;
    std::array<std::array<AnswerLaw, 6>, 6> entangled_{};
    std::vector<double> weights_;
    std::vector<std::array<double, 6>> pa_;
    std::vector<std::array<double, 6>> pb_;
};

struct RoundOutcome {
    size_t s;
    size_t t;
    int a;
    int b;
};

/// s, t uniform on 0..5, answers from the strategies (no cross-communication).
RoundOutcome play_round(const GameTables &tables, Rng &rng);

struct ScoreReport {
    std::array<std::array<uint64_t, 6>, 6> counts{};
    std::array<std::array<uint64_t, 6>, 6> ones{};
    SixTable p_hat{};
    double score = 0;
    Verdict verdict = Verdict::NotEntangled;
    uint64_t rounds = 0;

    void add(const RoundOutcome &r);
    void merge(const ScoreReport &other);
    /// Fills p_hat (0 for empty cells), score and verdict (Entangled iff score < 0).
    void finalize(const SixTable &beta);
    nlohmann::json to_json() const;
};

/// N = ceil(4608 ln(72/delta) (sum |beta|)^2 / eta^2), at least 36.
uint64_t repetitions(double delta, double eta, const SixTable &beta);
uint64_t repetitions(double delta, double eta, double sum_abs_beta);

struct SqgRunOptions {
    double delta = 0.2;
    uint64_t seed = 0;
    unsigned workers = 1;
    /// Overrides the repetition formula when nonzero.
    uint64_t rounds = 0;
};

ScoreReport run_sqg_experiment(
    const SharedResource &resource,
    const Witness &witness,
    const SqgStrategy &a,
    const SqgStrategy &b,
    const SqgRunOptions &options);

}  // namespace nelsim

#endif
