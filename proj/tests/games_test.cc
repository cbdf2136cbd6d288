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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nelsim/games/chsh.h"
#include "nelsim/games/sqg.h"
#include "nelsim/qcore/errors.h"
#include "nelsim/qcore/haar.h"
#include "nelsim/qcore/named_states.h"

using namespace nelsim;

namespace {

/// Reference for the honest success probability: explicit sum over the 16 basis indices
/// (input_A, rho_A, rho_B, input_B) against the product of the two |phi+> projectors.
double reference_honest_prob(const Matrix &rho, const Matrix &tau, const Matrix &omega) {
    auto phi = [](int x, int y) { return x == y ? std::numbers::sqrt2 / 2 : 0.0; };
    Complex total = 0;
    for (int i = 0; i < 16; i++) {
        for (int j = 0; j < 16; j++) {
            int ia = i >> 3, ra = (i >> 2) & 1, rb = (i >> 1) & 1, ib = i & 1;
            int ja = j >> 3, sa = (j >> 2) & 1, sb = (j >> 1) & 1, jb = j & 1;
            double proj = phi(ia, ra) * phi(ja, sa) * phi(rb, ib) * phi(sb, jb);
            if (proj == 0) {
                continue;
            }
            total += proj * tau(ja, ia) * rho(2 * sa + sb, 2 * ra + rb) * omega(jb, ib);
        }
    }
    return total.real();
}

double chi_square_2xk(const std::vector<std::array<double, 2>> &table) {
    double n = 0, col0 = 0;
    for (const auto &r : table) {
        n += r[0] + r[1];
        col0 += r[0];
    }
    double chi = 0;
    for (const auto &r : table) {
        double rs = r[0] + r[1];
        double e0 = rs * col0 / n;
        double e1 = rs * (n - col0) / n;
        chi += (r[0] - e0) * (r[0] - e0) / e0 + (r[1] - e1) * (r[1] - e1) / e1;
    }
    return chi;
}

/// Standard deviation of the estimated score from the exact cell probabilities and cell counts.
double score_sigma(const GameTables &tables, const SixTable &beta, const ScoreReport &r) {
    double var = 0;
    for (size_t s = 0; s < 6; s++) {
        for (size_t t = 0; t < 6; t++) {
            double p = tables.p11(s, t);
            var += beta[s][t] * beta[s][t] * p * (1 - p) / (double)r.counts[s][t];
        }
    }
    return std::sqrt(var);
}

}  // namespace

TEST(sqg, honest_joint_prob_matches_reference) {
    Rng rng(1);
    for (int k = 0; k < 10; k++) {
        DensityMatrix rho = DensityMatrix::from_pure(haar_state(4, rng));
        for (size_t s = 0; s < 6; s++) {
            for (size_t t = 0; t < 6; t++) {
                double ref = reference_honest_prob(rho.matrix(), six_state(s).matrix(), six_state(t).matrix());
                EXPECT_NEAR(honest_joint_prob(rho, s, t), ref, 1e-12);
            }
        }
    }
    EXPECT_THROW(honest_joint_prob(werner(0.5), 6, 0), ValidationError);
}

TEST(sqg, singlet_same_input_value) {
    DensityMatrix psi = bell(BellState::PsiMinus);
    EXPECT_NEAR(honest_joint_prob(psi, 0, 0), 0.0, 1e-15);
    EXPECT_NEAR(honest_joint_prob(psi, 0, 1), 0.125, 1e-15);
    EXPECT_NEAR(honest_joint_prob(psi, 2, 2), 0.0, 1e-15);
    EXPECT_NEAR(honest_joint_prob(psi, 0, 2), 0.0625, 1e-15);
}

TEST(sqg, ideal_score_equals_quarter_witness_value) {
    Rng rng(2);
    for (int k = 0; k < 20; k++) {
        DensityMatrix rho = DensityMatrix::from_pure(haar_state(4, rng));
        Witness w = ppt_witness(rho);
        double score = 0;
        for (size_t s = 0; s < 6; s++) {
            for (size_t t = 0; t < 6; t++) {
                score += w.beta[s][t] * honest_joint_prob(rho, s, t);
            }
        }
        EXPECT_NEAR(score, witness_value(w, rho) / 4, 1e-10);
    }
}

TEST(sqg, product_state_ideal_score_is_nonnegative) {
    Witness w = ppt_witness(werner(0.9));
    Rng rng(3);
    for (int k = 0; k < 20; k++) {
        auto prod = DensityMatrix::from_matrix(kron(haar_qubit(rng).projector(), haar_qubit(rng).projector()));
        GameTables tables(prod, SqgStrategy::honest(), SqgStrategy::honest());
        EXPECT_GE(tables.exact_score(w.beta), -1e-12);
        EXPECT_NEAR(tables.exact_score(w.beta), witness_value(w, prod) / 4, 1e-12);
    }
}

TEST(sqg, strategy_validation) {
    EXPECT_THROW(SqgStrategy::from_operator("big", 2.0 * Matrix::Identity(4, 4)), NotPsdError);
    EXPECT_THROW(SqgStrategy::from_operator("small", Matrix::Identity(2, 2)), ValidationError);
    EXPECT_THROW(SqgStrategy::constant(2), ValidationError);
    Matrix nonherm = Matrix::Zero(4, 4);
    nonherm(0, 1) = 0.5;
    EXPECT_THROW(SqgStrategy::from_operator("nh", nonherm), ValidationError);
}

TEST(sqg, separable_source_validation) {
    auto z = qubit_state("ket0");
    EXPECT_THROW(SeparableSource::from_components({{0.5, z, z}}), ValidationError);
    EXPECT_THROW(SeparableSource::from_components({{-0.5, z, z}, {1.5, z, z}}), ValidationError);
    EXPECT_THROW(SeparableSource::from_components({}), ValidationError);
    auto src = SeparableSource::from_components({{0.25, z, z}, {0.75, qubit_state("plus"), z}});
    EXPECT_NEAR(src.joint_matrix().trace().real(), 1.0, 1e-15);
}

TEST(sqg, always_zero_players_score_exactly_zero) {
    Witness w = ppt_witness(werner(0.9));
    SqgRunOptions opt;
    opt.rounds = 10000;
    opt.seed = 5;
    auto r = run_sqg_experiment(werner(0.9), w, SqgStrategy::constant(0), SqgStrategy::constant(0), opt);
    EXPECT_EQ(r.score, 0.0);
    EXPECT_EQ(r.verdict, Verdict::NotEntangled);
    EXPECT_EQ(r.rounds, 10000u);
    uint64_t total = 0;
    for (const auto &row : r.counts) {
        for (auto c : row) {
            total += c;
        }
    }
    EXPECT_EQ(total, 10000u);
}

TEST(sqg, honest_werner_score_within_three_sigma) {
    DensityMatrix rho = werner(0.9);
    Witness w = ppt_witness(rho);
    GameTables tables(rho, SqgStrategy::honest(), SqgStrategy::honest());
    double expected = witness_value(w, rho) / 4;
    EXPECT_NEAR(expected, -0.10625, 1e-12);
    for (uint64_t n : {20000, 100000, 400000}) {
        SqgRunOptions opt;
        opt.rounds = n;
        opt.seed = 77 + n;
        auto r = run_sqg_experiment(rho, w, SqgStrategy::honest(), SqgStrategy::honest(), opt);
        EXPECT_NEAR(r.score, expected, 3 * score_sigma(tables, w.beta, r)) << n;
    }
}

TEST(sqg, score_is_beta_weighted_estimate) {
    DensityMatrix rho = werner(0.9);
    Witness w = ppt_witness(rho);
    SqgRunOptions opt;
    opt.rounds = 5000;
    opt.seed = 4;
    auto r = run_sqg_experiment(rho, w, SqgStrategy::honest(), SqgStrategy::honest(), opt);
    double recomputed = 0;
    for (size_t s = 0; s < 6; s++) {
        for (size_t t = 0; t < 6; t++) {
            recomputed += w.beta[s][t] * (double)r.ones[s][t] / (double)r.counts[s][t];
        }
    }
    EXPECT_NEAR(r.score, recomputed, 1e-15);
}

TEST(sqg, separable_adversaries_have_positive_exact_scores) {
    Witness w = ppt_witness(werner(0.9));
    Vector zero(2), plus_i(2);
    zero << 1, 0;
    plus_i << std::numbers::sqrt2 / 2, Complex(0, std::numbers::sqrt2 / 2);
    auto honest = SqgStrategy::honest();
    auto coin = SqgStrategy::from_operator("coin", Matrix::Identity(4, 4) / 2.0);
    auto z_in = SqgStrategy::input_projector("z_input", zero);
    auto one = SqgStrategy::constant(1);
    auto s00 = SeparableSource::product(qubit_state("ket0"), qubit_state("ket0"));
    auto spi = SeparableSource::product(qubit_state("plus"), qubit_state("plus_i"));
    EXPECT_NEAR(GameTables(s00, honest, honest).exact_score(w.beta), 0.125, 1e-12);
    EXPECT_GT(GameTables(spi, honest, honest).exact_score(w.beta), 0.0);
    EXPECT_NEAR(GameTables(s00, one, one).exact_score(w.beta), 1.0, 1e-12);
    EXPECT_NEAR(GameTables(s00, coin, coin).exact_score(w.beta), 0.25, 1e-12);
    EXPECT_GT(GameTables(s00, z_in, z_in).exact_score(w.beta), 0.0);
    auto orth = SeparableSource::product(qubit_state("ket0"), qubit_state("ket1"));
    EXPECT_NEAR(GameTables(orth, honest, honest).exact_score(w.beta), 0.0, 1e-15);
}

TEST(sqg, separable_honest_players_not_entangled) {
    Witness w = ppt_witness(werner(0.9));
    auto src = SeparableSource::from_components(
        {{0.5, qubit_state("ket0"), qubit_state("ket0")}, {0.5, qubit_state("plus"), qubit_state("plus_i")}});
    SqgRunOptions opt;
    opt.rounds = 100000;
    opt.seed = 8;
    GameTables tables(src, SqgStrategy::honest(), SqgStrategy::honest());
    auto r = run_sqg_experiment(src, w, SqgStrategy::honest(), SqgStrategy::honest(), opt);
    EXPECT_GE(r.score, -3 * score_sigma(tables, w.beta, r));
    EXPECT_EQ(r.verdict, Verdict::NotEntangled);
}

TEST(sqg, no_signalling_marginals) {
    DensityMatrix rho = werner(0.9);
    GameTables tables(rho, SqgStrategy::honest(), SqgStrategy::honest());
    Rng rng(12);
    std::vector<std::array<double, 2>> a_by_t(6, {0, 0});
    std::vector<std::array<double, 2>> b_by_s(6, {0, 0});
    for (int k = 0; k < 100000; k++) {
        RoundOutcome r = play_round(tables, rng);
        a_by_t[r.t][r.a] += 1;
        b_by_s[r.s][r.b] += 1;
    }
    // 5 degrees of freedom, p = 0.001.
    EXPECT_LT(chi_square_2xk(a_by_t), 20.515);
    EXPECT_LT(chi_square_2xk(b_by_s), 20.515);
}

TEST(sqg, results_do_not_depend_on_worker_count) {
    DensityMatrix rho = werner(0.9);
    Witness w = ppt_witness(rho);
    SqgRunOptions opt;
    opt.rounds = 300000;
    opt.seed = 99;
    opt.workers = 1;
    auto r1 = run_sqg_experiment(rho, w, SqgStrategy::honest(), SqgStrategy::honest(), opt);
    opt.workers = 3;
    auto r3 = run_sqg_experiment(rho, w, SqgStrategy::honest(), SqgStrategy::honest(), opt);
    EXPECT_EQ(r1.ones, r3.ones);
    EXPECT_EQ(r1.counts, r3.counts);
    EXPECT_EQ(r1.score, r3.score);
}

TEST(sqg, repetition_counts) {
    EXPECT_EQ(repetitions(0.1, 0.5, 4.0), 1940301u);
    EXPECT_EQ(repetitions(0.2, 0.425, 3.0), 1351466u);
    Witness w = ppt_witness(werner(1.0));
    EXPECT_EQ(repetitions(0.2, w.eta, w.beta), 976435u);
    EXPECT_GT(repetitions(0.01, 0.5, 3.0), repetitions(0.1, 0.5, 3.0));
    EXPECT_EQ(repetitions(0.9, 1e6, 1e-6), 36u);
    EXPECT_THROW(repetitions(0.1, 0.0, 3.0), ValidationError);
    EXPECT_THROW(repetitions(1.0, 0.5, 3.0), ValidationError);
}

TEST(sqg, config_validation) {
    GameConfig c;
    EXPECT_NO_THROW(c.validate());
    c.delta = 1.0;
    EXPECT_THROW(c.validate(), ValidationError);
    c.delta = 0.5;
    c.rounds = 0;
    EXPECT_THROW(c.validate(), ValidationError);
}

TEST(chsh, exact_values) {
    EXPECT_EQ(chsh_classical_value({0, 0}, {0, 0}), 0.75);
    EXPECT_EQ(chsh_classical_optimum(), 0.75);
    EXPECT_NEAR(chsh_quantum_value(), std::pow(std::cos(std::numbers::pi / 8), 2), 1e-15);
}

TEST(chsh, monte_carlo_rates) {
    const uint64_t n = 1000000;
    auto r = chsh_demo(2024, n);
    double q = std::pow(std::cos(std::numbers::pi / 8), 2);
    EXPECT_NEAR(r.quantum_rate(), q, 3 * std::sqrt(q * (1 - q) / n));
    EXPECT_LE(r.classical_rate(), 0.75 + 3 * std::sqrt(0.1875 / n));
    EXPECT_THROW(chsh_demo(1, 0), ValidationError);
}
