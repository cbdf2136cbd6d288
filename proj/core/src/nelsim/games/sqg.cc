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

#include "nelsim/games/sqg.h"

#include <cmath>

#include "nelsim/qcore/errors.h"
#include "nelsim/qcore/named_states.h"
#include "nelsim/qcore/parallel.h"
#include "nelsim/qcore/povm.h"

namespace nelsim {

namespace {

constexpr uint64_t SQG_DOMAIN = 0x5347'0001;
constexpr uint64_t SQG_CHUNK = 1 << 16;

Matrix swap_qubits() {
    Matrix s = Matrix::Zero(4, 4);
    s(0, 0) = 1;
    s(1, 2) = 1;
    s(2, 1) = 1;
    s(3, 3) = 1;
    return s;
}

double clamp01(double p) {
    return std::min(1.0, std::max(0.0, p));
}

void check_index(size_t s, size_t t) {
    if (s >= 6 || t >= 6) {
        throw ValidationError("input index out of range 0..5");
    }
}

}  // namespace

const char *verdict_name(Verdict v) {
    return v == Verdict::Entangled ? "ENTANGLED" : "NOT-ENTANGLED";
}

void GameConfig::validate() const {
    if (rounds < 1) {
        throw ValidationError("rounds must be at least 1");
    }
    if (ell < 1) {
        throw ValidationError("security parameter must be positive");
    }
    if (!(delta > 0 && delta < 1)) {
        throw ValidationError("delta must lie in (0, 1)");
    }
}

SeparableSource SeparableSource::from_components(std::vector<SeparableComponent> components) {
    if (components.empty()) {
        throw ValidationError("separable source needs at least one component");
    }
    double total = 0;
    for (const auto &c : components) {
        if (!(c.weight > 0) || !std::isfinite(c.weight)) {
            throw ValidationError("separable source weights must be positive");
        }
        if (c.sigma_a.dim() != 2 || c.sigma_b.dim() != 2) {
            throw ValidationError("separable source components must be single-qubit states");
        }
        total += c.weight;
    }
    if (std::abs(total - 1) > TOLERANCE) {
        throw ValidationError("separable source weights must sum to 1");
    }
    return SeparableSource(std::move(components));
}

SeparableSource SeparableSource::product(const DensityMatrix &sigma_a, const DensityMatrix &sigma_b) {
    return from_components({{1.0, sigma_a, sigma_b}});
}

std::vector<double> SeparableSource::weights() const {
    std::vector<double> w;
    for (const auto &c : components_) {
        w.push_back(c.weight);
    }
    return w;
}

Matrix SeparableSource::joint_matrix() const {
    Matrix m = Matrix::Zero(4, 4);
    for (const auto &c : components_) {
        m += c.weight * kron(c.sigma_a.matrix(), c.sigma_b.matrix());
    }
    return m;
}

SqgStrategy SqgStrategy::from_operator(std::string name, const Matrix &answer_one) {
    if (answer_one.rows() != 4 || answer_one.cols() != 4 || !all_finite(answer_one)) {
        throw ValidationError("strategy operator must be a finite 4x4 matrix");
    }
    if (hermitian_defect(answer_one) > TOLERANCE) {
        throw ValidationError("strategy operator must be Hermitian");
    }
    RealVector ev = hermitian_eigenvalues(answer_one);
    if (ev.minCoeff() < -TOLERANCE) {
        throw NotPsdError("strategy operator must be positive semidefinite", ev.minCoeff());
    }
    if (ev.maxCoeff() > 1 + TOLERANCE) {
        throw NotPsdError("strategy complement must be positive semidefinite", 1 - ev.maxCoeff());
    }
    return SqgStrategy(std::move(name), answer_one);
}

SqgStrategy SqgStrategy::honest() {
    return SqgStrategy("honest", bell(BellState::PhiPlus).matrix());
}

SqgStrategy SqgStrategy::constant(int bit) {
    if (bit != 0 && bit != 1) {
        throw ValidationError("constant strategy answer must be a bit");
    }
    return SqgStrategy(bit ? "always1" : "always0", Matrix(Matrix::Identity(4, 4) * (double)bit));
}

SqgStrategy SqgStrategy::input_projector(std::string name, const Vector &ket) {
    if (ket.size() != 2 || std::abs(ket.squaredNorm() - 1) > TOLERANCE) {
        throw ValidationError("input projector needs a unit qubit ket");
    }
    return from_operator(std::move(name), kron(outer(ket), Matrix::Identity(2, 2)));
}

double SqgStrategy::prob_one(const Matrix &tau, const Matrix &share) const {
    return clamp01(trace_product(e_, kron(tau, share)).real());
}

int SqgStrategy::answer(const DensityMatrix &tau, const DensityMatrix &share, Rng &rng) const {
    return rng.bernoulli(prob_one(tau.matrix(), share.matrix())) ? 1 : 0;
}

AnswerLaw joint_answer_law(
    const Matrix &rho, const SqgStrategy &a, const SqgStrategy &b, const Matrix &tau, const Matrix &omega) {
    static const Matrix SWAP = swap_qubits();
    static const Matrix I4 = Matrix::Identity(4, 4);
    Matrix ea = a.answer_one();
    Matrix eb = SWAP * b.answer_one() * SWAP;
    Matrix state = kron(kron(tau, rho), omega);
    AnswerLaw law;
    law.p_a = clamp01(trace_product(kron(ea, I4), state).real());
    law.p_b = clamp01(trace_product(kron(I4, eb), state).real());
    law.p_ab = clamp01(trace_product(kron(ea, eb), state).real());
    law.p_ab = std::min(law.p_ab, std::min(law.p_a, law.p_b));
    return law;
}

double honest_joint_prob(const DensityMatrix &rho, size_t s, size_t t) {
    check_index(s, t);
    if (rho.dim() != 4) {
        throw ValidationError("honest_joint_prob needs a two-qubit state");
    }
    static const SqgStrategy H = SqgStrategy::honest();
    return joint_answer_law(rho.matrix(), H, H, six_state(s).matrix(), six_state(t).matrix()).p_ab;
}

GameTables::GameTables(const SharedResource &resource, const SqgStrategy &a, const SqgStrategy &b) {
    if (const auto *rho = std::get_if<DensityMatrix>(&resource)) {
        if (rho->dim() != 4) {
            throw ValidationError("shared resource must be a two-qubit state");
        }
        mode_ = ResourceMode::Entangled;
        for (size_t s = 0; s < 6; s++) {
            for (size_t t = 0; t < 6; t++) {
                entangled_[s][t] =
                    joint_answer_law(rho->matrix(), a, b, six_state(s).matrix(), six_state(t).matrix());
            }
        }
    } else {
        const auto &src = std::get<SeparableSource>(resource);
        mode_ = ResourceMode::Separable;
        weights_ = src.weights();
        for (const auto &c : src.components()) {
            std::array<double, 6> pa{};
            std::array<double, 6> pb{};
            for (size_t s = 0; s < 6; s++) {
                pa[s] = a.prob_one(six_state(s).matrix(), c.sigma_a.matrix());
                pb[s] = b.prob_one(six_state(s).matrix(), c.sigma_b.matrix());
            }
            pa_.push_back(pa);
            pb_.push_back(pb);
        }
    }
}

double GameTables::p11(size_t s, size_t t) const {
    check_index(s, t);
    if (mode_ == ResourceMode::Entangled) {
        return entangled_[s][t].p_ab;
    }
    double p = 0;
    for (size_t k = 0; k < weights_.size(); k++) {
        p += weights_[k] * pa_[k][s] * pb_[k][t];
    }
    return p;
}

double GameTables::exact_score(const SixTable &beta) const {
    double score = 0;
    for (size_t s = 0; s < 6; s++) {
        for (size_t t = 0; t < 6; t++) {
            score += beta[s][t] * p11(s, t);
        }
    }
    return score;
}

std::pair<int, int> GameTables::answer(size_t s, size_t t, Rng &rng) const {
    if (mode_ == ResourceMode::Entangled) {
        const AnswerLaw &law = entangled_[s][t];
        int a = rng.uniform() < law.p_a ? 1 : 0;
        double pb;
        if (a) {
            pb = law.p_a > 0 ? law.p_ab / law.p_a : 0;
        } else {
            pb = law.p_a < 1 ? (law.p_b - law.p_ab) / (1 - law.p_a) : 0;
        }
        int b = rng.uniform() < pb ? 1 : 0;
        return {a, b};
    }
    size_t k = weights_.size() == 1 ? 0 : sample_index(weights_, rng);
    int a = rng.uniform() < pa_[k][s] ? 1 : 0;
    int b = rng.uniform() < pb_[k][t] ? 1 : 0;
    return {a, b};
}

RoundOutcome play_round(const GameTables &tables, Rng &rng) {
    RoundOutcome r;
    r.s = (size_t)rng.below(6);
    r.t = (size_t)rng.below(6);
    auto [a, b] = tables.answer(r.s, r.t, rng);
    r.a = a;
    r.b = b;
    return r;
}

void ScoreReport::add(const RoundOutcome &r) {
    counts[r.s][r.t]++;
    if (r.a == 1 && r.b == 1) {
        ones[r.s][r.t]++;
    }
    rounds++;
}

void ScoreReport::merge(const ScoreReport &other) {
    for (size_t s = 0; s < 6; s++) {
        for (size_t t = 0; t < 6; t++) {
            counts[s][t] += other.counts[s][t];
            ones[s][t] += other.ones[s][t];
        }
    }
    rounds += other.rounds;
}

void ScoreReport::finalize(const SixTable &beta) {
    score = 0;
    for (size_t s = 0; s < 6; s++) {
        for (size_t t = 0; t < 6; t++) {
            p_hat[s][t] = counts[s][t] ? (double)ones[s][t] / (double)counts[s][t] : 0.0;
            score += beta[s][t] * p_hat[s][t];
        }
    }
    verdict = score < 0 ? Verdict::Entangled : Verdict::NotEntangled;
}

nlohmann::json ScoreReport::to_json() const {
    nlohmann::json j;
    j["rounds"] = rounds;
    j["counts"] = counts;
    j["ones"] = ones;
    j["p_hat"] = p_hat;
    j["score"] = score;
    j["verdict"] = verdict_name(verdict);
    return j;
}

uint64_t repetitions(double delta, double eta, double sum_abs_beta) {
    if (!(eta > 0) || !std::isfinite(eta)) {
        throw ValidationError("eta must be positive");
    }
    if (!(delta > 0 && delta < 1)) {
        throw ValidationError("delta must lie in (0, 1)");
    }
    double n = std::ceil(4608.0 * std::log(72.0 / delta) * sum_abs_beta * sum_abs_beta / (eta * eta));
    if (!(n < 1e18)) {
        throw ValidationError("repetition count overflows");
    }
    return std::max<uint64_t>(36, (uint64_t)n);
}

uint64_t repetitions(double delta, double eta, const SixTable &beta) {
    return repetitions(delta, eta, sum_abs(beta));
}

ScoreReport run_sqg_experiment(
    const SharedResource &resource,
    const Witness &witness,
    const SqgStrategy &a,
    const SqgStrategy &b,
    const SqgRunOptions &options) {
    uint64_t n = options.rounds ? options.rounds : repetitions(options.delta, witness.eta, witness.beta);
    GameTables tables(resource, a, b);
    ScoreReport report = run_chunked<ScoreReport>(
        n,
        SQG_CHUNK,
        options.seed,
        SQG_DOMAIN,
        options.workers,
        [&](Rng &rng, uint64_t count, ScoreReport &acc) {
            for (uint64_t i = 0; i < count; i++) {
                acc.add(play_round(tables, rng));
            }
        },
        [](ScoreReport &total, const ScoreReport &part) { total.merge(part); });
    report.finalize(witness.beta);
    return report;
}

}  // namespace nelsim
