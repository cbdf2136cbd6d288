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
#include <set>

#include "nelsim/qcore/errors.h"
#include "nelsim/qcore/haar.h"
#include "nelsim/qcore/json_io.h"
#include "nelsim/qcore/named_states.h"
#include "nelsim/qcore/ops.h"
#include "nelsim/qcore/parallel.h"
#include "nelsim/qcore/povm.h"
#include "nelsim/qcore/rng.h"

using namespace nelsim;

namespace {

Matrix random_density(size_t dim, Rng &rng) {
    Matrix g(dim, dim);
    for (size_t i = 0; i < dim; i++) {
        for (size_t j = 0; j < dim; j++) {
            g(i, j) = Complex(rng.gaussian(), rng.gaussian());
        }
    }
    Matrix m = g * g.adjoint();
    return m / m.trace().real();
}

/// Loop-based reference for transposing the second qubit of a two-qubit operator.
Matrix reference_partial_transpose_b(const Matrix &m) {
    Matrix out(4, 4);
    for (int a = 0; a < 2; a++) {
        for (int b = 0; b < 2; b++) {
            for (int c = 0; c < 2; c++) {
                for (int d = 0; d < 2; d++) {
                    out(2 * a + b, 2 * c + d) = m(2 * a + d, 2 * c + b);
                }
            }
        }
    }
    return out;
}

/// Loop-based reference for tracing out everything but qubit `keep` of an n-qubit operator.
Matrix reference_single_qubit_marginal(const Matrix &m, int n, int keep) {
    Matrix out = Matrix::Zero(2, 2);
    int shift = n - 1 - keep;
    for (int i = 0; i < (1 << n); i++) {
        for (int j = 0; j < (1 << n); j++) {
            if ((i & ~(1 << shift)) == (j & ~(1 << shift))) {
                out((i >> shift) & 1, (j >> shift) & 1) += m(i, j);
            }
        }
    }
    return out;
}

}  // namespace

TEST(rng, deterministic_per_seed_and_stream) {
    Rng a(7, 3);
    Rng b(7, 3);
    Rng c(7, 4);
    std::vector<uint64_t> xs;
    for (int k = 0; k < 100; k++) {
        uint64_t x = a();
        ASSERT_EQ(x, b());
        xs.push_back(x);
    }
    int equal = 0;
    for (int k = 0; k < 100; k++) {
        equal += c() == xs[k];
    }
    EXPECT_EQ(equal, 0);
}

TEST(rng, fork_is_reproducible_and_distinct) {
    Rng base(11);
    Rng f1 = base.fork(1);
    Rng f1_again = Rng(11).fork(1);
    Rng f2 = base.fork(2);
    EXPECT_EQ(f1(), f1_again());
    EXPECT_NE(Rng(11).fork(1)(), f2());
}

TEST(rng, uniform_and_below_ranges) {
    Rng rng(5);
    std::array<int, 6> hist{};
    double sum = 0;
    const int n = 60000;
    for (int k = 0; k < n; k++) {
        double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        hist[rng.below(6)]++;
    }
    EXPECT_NEAR(sum / n, 0.5, 0.01);
    for (int h : hist) {
        EXPECT_NEAR(h, n / 6.0, 5 * std::sqrt(n / 6.0));
    }
}

TEST(rng, gaussian_moments) {
    Rng rng(9);
    double s1 = 0, s2 = 0;
    const int n = 100000;
    for (int k = 0; k < n; k++) {
        double g = rng.gaussian();
        s1 += g;
        s2 += g * g;
    }
    EXPECT_NEAR(s1 / n, 0.0, 0.02);
    EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(state, density_rejects_invalid_input) {
    Matrix m = Matrix::Identity(2, 2);
    EXPECT_THROW(DensityMatrix::from_matrix(m), ValidationError);
    Matrix neg(2, 2);
    neg << 1.5, 0, 0, -0.5;
    EXPECT_THROW(DensityMatrix::from_matrix(neg), NotPsdError);
    Matrix nonherm(2, 2);
    nonherm << 0.5, 0.1, 0.2, 0.5;
    EXPECT_THROW(DensityMatrix::from_matrix(nonherm), ValidationError);
    Matrix three = Matrix::Identity(3, 3) / 3.0;
    EXPECT_THROW(DensityMatrix::from_matrix(three), ValidationError);
    Matrix nan = Matrix::Identity(2, 2) / 2.0;
    nan(0, 1) = Complex(NAN, 0);
    EXPECT_THROW(DensityMatrix::from_matrix(nan), ValidationError);
}

TEST(state, density_does_not_repair) {
    Matrix m(2, 2);
    m << 0.5 + 1e-13, 0, 0, 0.5;
    auto rho = DensityMatrix::from_matrix(m);
    EXPECT_EQ(rho.matrix()(0, 0), m(0, 0));
}

TEST(state, pure_state_normalization) {
    Vector v(2);
    v << 1, 1;
    EXPECT_THROW(PureState::from_amplitudes(v), ValidationError);
    auto sub = PureState::subnormalized(v / 2.0);
    EXPECT_TRUE(sub.is_subnormalized());
    EXPECT_NEAR(sub.norm2(), 0.5, 1e-15);
    EXPECT_THROW(PureState::subnormalized(v), ValidationError);
    EXPECT_THROW(PureState::subnormalized(Vector::Zero(2)), ValidationError);
}

TEST(ops, partial_transpose_matches_reference_and_is_involution) {
    Rng rng(21);
    for (int k = 0; k < 20; k++) {
        Matrix m = random_density(4, rng);
        Matrix pt = partial_transpose(m, Subsystem::B);
        EXPECT_LT(max_abs_diff(pt, reference_partial_transpose_b(m)), 1e-15);
        EXPECT_LT(max_abs_diff(partial_transpose(pt, Subsystem::B), m), 1e-15);
        Matrix full = m.transpose();
        EXPECT_LT(max_abs_diff(partial_transpose(partial_transpose(m, Subsystem::A), Subsystem::B), full), 1e-15);
    }
    EXPECT_THROW(partial_transpose(Matrix::Identity(8, 8), Subsystem::A), ValidationError);
}

TEST(ops, bell_partial_transpose_is_half_swap) {
    Matrix pt = partial_transpose(bell(BellState::PhiPlus).matrix(), Subsystem::B);
    Matrix swap = Matrix::Zero(4, 4);
    swap(0, 0) = swap(3, 3) = 1;
    swap(1, 2) = swap(2, 1) = 1;
    EXPECT_LT(max_abs_diff(pt, swap / 2.0), 1e-15);
}

TEST(ops, partial_trace_matches_reference) {
    Rng rng(22);
    for (int k = 0; k < 10; k++) {
        Matrix m = random_density(8, rng);
        for (int q = 0; q < 3; q++) {
            Matrix got = partial_trace(m, uint64_t{1} << q);
            EXPECT_LT(max_abs_diff(got, reference_single_qubit_marginal(m, 3, q)), 1e-14);
        }
        Matrix full = partial_trace(m, 0b111);
        EXPECT_LT(max_abs_diff(full, m), 1e-15);
    }
}

TEST(ops, partial_trace_of_product_factorizes) {
    Matrix a = six_state(2).matrix();
    Matrix b = six_state(5).matrix();
    Matrix ab = kron(a, b);
    EXPECT_LT(max_abs_diff(partial_trace(ab, KEEP_A), a), 1e-15);
    EXPECT_LT(max_abs_diff(partial_trace(ab, KEEP_B), b), 1e-15);
}

TEST(named_states, six_states_are_three_mutually_unbiased_bases) {
    for (size_t s = 0; s < 6; s++) {
        for (size_t t = 0; t < 6; t++) {
            double overlap = std::norm(six_state_ket(s).amplitudes().dot(six_state_ket(t).amplitudes()));
            double expected = s == t ? 1.0 : (s / 2 == t / 2 ? 0.0 : 0.5);
            EXPECT_NEAR(overlap, expected, 1e-15) << s << " " << t;
        }
    }
    EXPECT_THROW(six_state(6), ValidationError);
}

TEST(named_states, werner_and_rho0_entries) {
    Matrix w = werner(0.9).matrix();
    EXPECT_NEAR(w(0, 0).real(), 0.025, 1e-15);
    EXPECT_NEAR(w(1, 1).real(), 0.475, 1e-15);
    EXPECT_NEAR(w(1, 2).real(), -0.45, 1e-15);
    Matrix r = rho0(0.5).matrix();
    EXPECT_NEAR(r(0, 0).real(), 0.25, 1e-15);
    EXPECT_NEAR(r(1, 1).real(), 0.5, 1e-15);
    EXPECT_NEAR(r(2, 2).real(), 0.25, 1e-15);
    EXPECT_NEAR(r(1, 2).real(), -0.25, 1e-15);
    EXPECT_THROW(werner(1.2), ValidationError);
}

TEST(named_states, hirsch_is_average_of_four_terms) {
    auto s0 = qubit_state("ket0");
    Matrix h = hirsch(1.0 / 3, s0, s0).matrix();
    Matrix r0 = rho0(1.0 / 3).matrix();
    Matrix ra = reference_single_qubit_marginal(r0, 2, 0);
    Matrix rb = reference_single_qubit_marginal(r0, 2, 1);
    Matrix z = s0.matrix();
    Matrix expected = (r0 + kron(ra, z) + kron(z, rb) + kron(z, z)) / 4.0;
    EXPECT_LT(max_abs_diff(h, expected), 1e-15);
    EXPECT_NEAR(h.trace().real(), 1.0, 1e-15);
}

TEST(named_states, spec_parser) {
    EXPECT_EQ(max_abs_diff(named_state("werner:0.9").matrix(), werner(0.9).matrix()), 0.0);
    EXPECT_LT(max_abs_diff(named_state("bell:psi-").matrix(), bell(BellState::PsiMinus).matrix()), 1e-15);
    EXPECT_LT(
        max_abs_diff(named_state("product:ket0:plus").matrix(), kron(six_state(0).matrix(), six_state(2).matrix())),
        1e-15);
    EXPECT_LT(max_abs_diff(named_state("mixed").matrix(), Matrix::Identity(4, 4) / 4.0), 1e-15);
    EXPECT_THROW(named_state("werner:1.5"), ValidationError);
    EXPECT_THROW(named_state("werner:abc"), ValidationError);
    EXPECT_THROW(named_state("nosuch:1"), ValidationError);
    EXPECT_THROW(named_state("product:ket0"), ValidationError);
}

TEST(povm, validation) {
    Matrix half = Matrix::Identity(2, 2) / 2.0;
    EXPECT_NO_THROW(Povm::from_elements({half, half}));
    EXPECT_THROW(Povm::from_elements({half}), ValidationError);
    Matrix neg(2, 2);
    neg << 1.2, 0, 0, 0.5;
    Matrix comp = Matrix::Identity(2, 2) - neg;
    EXPECT_THROW(Povm::from_elements({neg, comp}), NotPsdError);
    EXPECT_THROW(Povm::from_elements({}), ValidationError);
}

TEST(povm, fine_grain_resolves_identity_and_preserves_coarse_elements) {
    Rng rng(31);
    for (int k = 0; k < 10; k++) {
        Povm p = random_rank_one_qubit_povm(2 + k % 4, rng);
        FineGrainedPovm f = fine_grain(p);
        EXPECT_LT(max_abs_diff(f.resolution(), Matrix::Identity(2, 2)), 1e-10);
        Povm back = f.as_povm();
        for (size_t j = 0; j < p.size(); j++) {
            EXPECT_LT(max_abs_diff(back[j], p[j]), 1e-10);
        }
    }
    Matrix mixed = Matrix::Identity(4, 4) / 2.0;
    FineGrainedPovm f = fine_grain(Povm::from_elements({mixed, mixed}));
    EXPECT_EQ(f.size(), 8u);
}

TEST(povm, fine_grain_is_deterministic_under_phase) {
    Vector v(2);
    v << Complex(0.6, 0), Complex(0, 0.8);
    Povm p1 = Povm::binary_projective(v);
    Povm p2 = Povm::binary_projective(v * std::polar(1.0, 1.1));
    FineGrainedPovm f1 = fine_grain(p1);
    FineGrainedPovm f2 = fine_grain(p2);
    ASSERT_EQ(f1.size(), f2.size());
    for (size_t k = 0; k < f1.size(); k++) {
        EXPECT_LT((f1.elements[k].ket - f2.elements[k].ket).norm(), 1e-12);
        EXPECT_EQ(f1.elements[k].coarse, f2.elements[k].coarse);
    }
}

TEST(povm, born_sampling_matches_probabilities) {
    auto rho = six_state(2);
    Povm z = Povm::computational(2);
    Rng rng(4);
    int ones = 0;
    const int n = 40000;
    for (int k = 0; k < n; k++) {
        ones += born_sample(rho, z, rng) == 1;
    }
    EXPECT_NEAR(ones / (double)n, 0.5, 4 * std::sqrt(0.25 / n));
    std::vector<double> probs{0, 0.3, 0, 0.7, 0};
    EXPECT_EQ(sample_index(probs, 0.0), 1u);
    EXPECT_EQ(sample_index(probs, 0.5), 3u);
    EXPECT_EQ(sample_index(probs, 0.9999999999999), 3u);
}

TEST(haar, states_are_normalized_and_isotropic) {
    Rng rng(8);
    double z = 0;
    const int n = 20000;
    for (int k = 0; k < n; k++) {
        PureState psi = haar_qubit(rng);
        ASSERT_NEAR(psi.norm2(), 1.0, 1e-12);
        z += std::norm(psi[0]) - std::norm(psi[1]);
    }
    EXPECT_NEAR(z / n, 0.0, 4 * std::sqrt(1.0 / 3 / n));
}

TEST(json_io, roundtrip) {
    Rng rng(3);
    Matrix m = random_density(4, rng);
    EXPECT_LT(max_abs_diff(matrix_from_json(matrix_to_json(m)), m), 1e-15);
    Povm p = random_rank_one_qubit_povm(3, rng);
    Povm q = povm_from_json(povm_to_json(p));
    for (size_t k = 0; k < p.size(); k++) {
        EXPECT_LT(max_abs_diff(p[k], q[k]), 1e-15);
    }
    EXPECT_THROW(density_from_json(matrix_to_json(Matrix::Identity(2, 2))), ValidationError);
}

TEST(parallel, result_is_independent_of_worker_count) {
    auto body = [](Rng &rng, uint64_t count, uint64_t &acc) {
        for (uint64_t k = 0; k < count; k++) {
            acc += rng() >> 40;
        }
    };
    auto merge = [](uint64_t &t, const uint64_t &p) { t += p; };
    uint64_t one = run_chunked<uint64_t>(100003, 1000, 42, 7, 1, body, merge);
    uint64_t four = run_chunked<uint64_t>(100003, 1000, 42, 7, 4, body, merge);
    EXPECT_EQ(one, four);
    uint64_t other_seed = run_chunked<uint64_t>(100003, 1000, 43, 7, 1, body, merge);
    EXPECT_NE(one, other_seed);
}

TEST(parallel, propagates_worker_exceptions) {
    auto body = [](Rng &, uint64_t, int &) { throw ValidationError("boom"); };
    auto merge = [](int &, const int &) {};
    EXPECT_THROW(run_chunked<int>(10, 1, 0, 0, 3, body, merge), ValidationError);
}
