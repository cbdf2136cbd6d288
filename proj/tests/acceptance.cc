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


#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "cli/selftest.h"
#include "nelsim/certify/certification.h"
#include "nelsim/certify/edqc.h"
#include "nelsim/games/chsh.h"
#include "nelsim/games/sqg.h"
#include "nelsim/lhv/lhv.h"
#include "nelsim/postsim/circuit.h"
#include "nelsim/postsim/dotprod.h"
#include "nelsim/postsim/sim.h"
#include "nelsim/qcore/haar.h"
#include "nelsim/qcore/linalg.h"
#include "nelsim/qcore/named_states.h"
#include "nelsim/rsp/rsp.h"
#include "nelsim/witness/witness.h"

using namespace nelsim;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = false;
    /// Empty when the criterion is expected to pass; otherwise why it is expected to fail.
    std::string expected_failure;
    std::string summary;
};

void detail(const char *fmt, ...) __attribute__((format(printf, 1, 2)));
void detail(const char *fmt, ...) {
    va_list args;
    va_start(args, fmt);
    std::printf("    ");
    std::vprintf(fmt, args);
    std::printf("\n");
    va_end(args);
}

std::string format(const char *fmt, ...) __attribute__((format(printf, 1, 2)));
std::string format(const char *fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

double chi_square_p(double chi, double df) {
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), chi));
}

/// Chi-square statistic and p-value of counts against a probability vector (zero-probability cells skipped).
std::pair<double, double> chi_square_test(const std::vector<double> &counts, const std::vector<double> &probs) {
    double n = 0;
    for (double c : counts) {
        n += c;
    }
    double chi = 0;
    int cells = 0;
    for (size_t k = 0; k < counts.size(); k++) {
        if (probs[k] > 0) {
            double e = n * probs[k];
            chi += (counts[k] - e) * (counts[k] - e) / e;
            cells++;
        }
    }
    return {chi, chi_square_p(chi, cells - 1)};
}

double tv_distance(const std::vector<double> &a, const std::vector<double> &b) {
    double tv = 0;
    for (size_t k = 0; k < a.size(); k++) {
        tv += std::abs(a[k] - b[k]);
    }
    return tv / 2;
}

Outcome criterion1() {
    auto start = Clock::now();
    double optimum = chsh_classical_optimum();
    ChshResult r = chsh_demo(1, 1000000);
    double elapsed = seconds_since(start);
    detail("classical deterministic optimum %.17g; quantum rate %.6f at %llu rounds (exact %.6f), %.2f s", optimum,
           r.quantum_rate(), (unsigned long long)r.rounds, chsh_quantum_value(), elapsed);
    Outcome o;
    o.pass = optimum == 0.75 && std::abs(r.quantum_rate() - 0.8536) <= 0.002 && elapsed < 30;
    o.summary = format("classical max %.4f, quantum %.4f", optimum, r.quantum_rate());
    return o;
}

Outcome criterion2() {
    Rng rng(2);
    double worst_formula = 0, worst_trace = 0;
    for (int k = 0; k < 100; k++) {
        double p = 1.0 / 3.0 + (2.0 / 3.0) * (1e-3 + (1 - 1e-3) * rng.uniform());
        DensityMatrix rho = werner(p);
        Witness w = ppt_witness(rho);
        double score = GameTables(rho, SqgStrategy::honest(), SqgStrategy::honest()).exact_score(w.beta);
        worst_formula = std::max(worst_formula, std::abs(score - (1 - 3 * p) / 16));
        worst_trace = std::max(worst_trace, std::abs(score - witness_value(w, rho) / 4));
    }
    detail("100 werner(p), p in (1/3, 1]: max |score - (1-3p)/16| = %.3g, max |score - Tr[W rho]/4| = %.3g",
           worst_formula, worst_trace);
    Outcome o;
    o.pass = worst_formula <= 1e-9 && worst_trace <= 1e-9;
    o.summary = format("max deviation %.3g", std::max(worst_formula, worst_trace));
    return o;
}

struct Adversary {
    std::string name;
    SeparableSource source;
    SqgStrategy a;
    SqgStrategy b;
};

Outcome criterion3() {
    const int seeds = 50;
    DensityMatrix rho = werner(0.9);
    Witness w = ppt_witness(rho);
    SqgRunOptions opt;
    opt.delta = 0.2;
    double slowest = 0;
    auto run = [&](const SharedResource &res, const SqgStrategy &a, const SqgStrategy &b, Verdict want) {
        int hits = 0;
        for (int seed = 0; seed < seeds; seed++) {
            opt.seed = (uint64_t)seed;
            auto start = Clock::now();
            hits += run_sqg_experiment(res, w, a, b, opt).verdict == want;
            slowest = std::max(slowest, seconds_since(start));
        }
        return hits;
    };
    auto honest = SqgStrategy::honest();
    int entangled = run(rho, honest, honest, Verdict::Entangled);
    detail("werner(0.9), delta 0.2, N = %llu rounds: ENTANGLED in %d/%d seeds",
           (unsigned long long)repetitions(0.2, w.eta, w.beta), entangled, seeds);
    bool pass = entangled >= 40;

    Vector zero(2), plus(2);
    zero << 1, 0;
    plus << std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2;
    auto coin = SqgStrategy::from_operator("coin", Matrix::Identity(4, 4) / 2.0);
    auto z_in = SqgStrategy::input_projector("z-input", zero);
    auto x_in = SqgStrategy::input_projector("x-input", plus);
    auto s00 = SeparableSource::product(qubit_state("ket0"), qubit_state("ket0"));
    auto spi = SeparableSource::product(qubit_state("plus"), qubit_state("plus_i"));
    auto mixed = SeparableSource::product(qubit_state("mixed"), qubit_state("mixed"));
    auto mix = SeparableSource::from_components(
        {{0.5, qubit_state("ket0"), qubit_state("ket0")}, {0.5, qubit_state("plus"), qubit_state("plus_i")}});
    std::vector<Adversary> adversaries = {
        {"honest on |00>", s00, honest, honest},
        {"honest on |+>|+i>", spi, honest, honest},
        {"honest on I/2 (x) I/2", mixed, honest, honest},
        {"honest on mixture of |00> and |+>|+i>", mix, honest, honest},
        {"coin flips on |00>", s00, coin, coin},
        {"always 1 on |00>", s00, SqgStrategy::constant(1), SqgStrategy::constant(1)},
        {"always 0 on |00>", s00, SqgStrategy::constant(0), SqgStrategy::constant(0)},
        {"Z-measure inputs on |00>", s00, z_in, z_in},
        {"X-measure inputs on |+>|+i>", spi, x_in, x_in},
        {"honest vs Z-measure on mixture", mix, honest, z_in},
    };
    for (const auto &adv : adversaries) {
        double exact = GameTables(adv.source, adv.a, adv.b).exact_score(w.beta);
        int rejected = run(adv.source, adv.a, adv.b, Verdict::NotEntangled);
        detail("separable adversary '%s': exact score %+.5f, NOT-ENTANGLED in %d/%d seeds", adv.name.c_str(), exact,
               rejected, seeds);
        pass = pass && rejected >= 40;
    }
    detail("slowest run %.2f s", slowest);
    Outcome o;
    o.pass = pass && slowest < 60;
    o.summary = format("honest %d/%d ENTANGLED, %zu separable adversaries checked", entangled, seeds,
                       adversaries.size());
    return o;
}

Outcome criterion4() {
    auto start = Clock::now();
    Rng rng(4);
    HirschModel model = HirschModel::make(1.0 / 3.0, qubit_state("ket0"), qubit_state("ket0"));
    DensityMatrix target = model.target_state();
    bool pass = true;
    double worst_gap = 0, worst_tv = 0, worst_z = 0, worst_realized_tv = 0;
    for (int k = 0; k < 10; k++) {
        Povm pa = random_rank_one_qubit_povm(2 + rng.below(3), rng);
        Povm pb = random_rank_one_qubit_povm(2 + rng.below(3), rng);
        LhvOutcomeTable t = hirsch_mc(model, fine_grain(pa), fine_grain(pb), 1000000, 40 + (uint64_t)k, 1);
        auto exact = joint_table(target, pa, pb);
        auto realized = joint_table(model.realized_state(), pa, pb);
        double tv = t.total_variation(exact), z = t.max_z(exact);
        double gap = tv_distance(exact, realized);
        worst_gap = std::max(worst_gap, gap);
        worst_tv = std::max(worst_tv, tv);
        worst_z = std::max(worst_z, z);
        worst_realized_tv = std::max(worst_realized_tv, t.total_variation(realized));
        detail("POVM pair %d (%zu x %zu outcomes): TV vs target %.5f, max |z| %.1f; exact target-vs-realized gap %.5f",
               k, pa.size(), pb.size(), tv, z, gap);
        pass = pass && tv <= 0.005 && z <= 3;
    }
    double elapsed = seconds_since(start);
    detail("Monte Carlo vs the state the algorithms realize: worst TV %.5f", worst_realized_tv);
    detail("%.1f s", elapsed);
    Outcome o;
    o.pass = pass && elapsed < 300;
    o.summary = format("worst TV %.4f, worst |z| %.1f", worst_tv, worst_z);
    if (worst_gap > 0.005) {
        o.expected_failure = format("the branch algorithms realize a different state; exact gap up to %.4f", worst_gap);
    }
    return o;
}

Outcome criterion5() {
    auto start = Clock::now();
    Rng rng(5);
    bool pass = true;
    double worst_ratio = 0;
    for (unsigned ell : {4u, 8u, 12u, 16u}) {
        DotProductOptions opt;
        opt.ell = ell;
        double band = std::ldexp(1.0, -(int)ell);
        double worst = 0;
        for (int k = 0; k < 100; k++) {
            Vector psi(2);
            do {
                double theta = 2 * std::numbers::pi * rng.uniform();
                psi << std::cos(theta), std::sin(theta);
            } while (std::abs(psi(0).real()) <= band || std::abs(psi(1).real()) <= band);
            Vector target = haar_qubit(rng).amplitudes();
            DotProductResult r = dot_product_estimate(psi, DotTarget::from_vector(target), opt, rng);
            worst = std::max(worst, std::abs(r.value - std::norm(psi.dot(target))));
        }
        detail("ell = %2u: max error %.3g (bound %.3g)", ell, worst, band);
        worst_ratio = std::max(worst_ratio, worst / band);
        pass = pass && worst <= band;
    }
    double elapsed = seconds_since(start);
    detail("%.2f s", elapsed);
    Outcome o;
    o.pass = pass && elapsed < 120;
    o.summary = format("worst error / 2^-ell = %.3g", worst_ratio);
    return o;
}

/// The fixed game for criteria 6 and 7: seeded 4-qubit circuits over {H, CCX} for both players.
std::pair<Circuit, Circuit> game_circuits(unsigned outputs) {
    Rng rng(67);
    Circuit a = random_circuit(4, 12, rng), b = random_circuit(4, 12, rng);
    if (outputs) {
        std::vector<unsigned> out;
        for (unsigned q = 0; q < outputs; q++) {
            out.push_back(q);
        }
        a.set_outputs(out);
        b.set_outputs(out);
    }
    return {a, b};
}

Outcome criterion6() {
    auto start = Clock::now();
    auto [ca, cb] = game_circuits(0);
    CircuitParty alice = CircuitParty::build(ca, qubit_state("ket0"));
    CircuitParty bob = CircuitParty::build(cb, qubit_state("ket0"));
    CoupledConfig cfg;
    cfg.samples = 100000;
    cfg.seed = 6;
    cfg.encoding_ell = 4;
    cfg.encoding_backend = ScalarBackend::Extended;
    cfg.estimator.ell = 16;
    CoupledResult r = run_coupled_simulation(cfg, alice, bob);
    auto ideal = r.ideal.distribution();
    double tv = r.efficient.total_variation(ideal) / 2;
    double sigma = 0;
    for (double p : ideal) {
        sigma += std::sqrt(p * (1 - p) / (double)cfg.samples);
    }
    sigma /= 2;
    double bound = 200 * std::ldexp(1.0, -32) + 3 * sigma;
    detail("4-qubit circuits %s | %s", ca.to_json().dump().c_str(), cb.to_json().dump().c_str());
    detail("%llu shared draws: TV %.3g, bound %.3g (MC sigma %.3g), %llu disagreeing samples, %.1f s",
           (unsigned long long)cfg.samples, tv, bound, sigma, (unsigned long long)r.disagreements,
           seconds_since(start));
    Outcome o;
    o.pass = tv <= bound;
    o.summary = format("TV %.3g <= %.3g", tv, bound);
    return o;
}

/// Exact answer law of the fixed game on a shared state, outcomes coarse-grained to the circuits' answers.
std::vector<double> answer_law(const DensityMatrix &rho, const Circuit &ca, const Circuit &cb) {
    auto coarse = [](const Circuit &c) {
        Povm full = circuit_outcome_povm(c);
        std::vector<Matrix> es(c.answer_count(), Matrix::Zero(2, 2));
        for (uint64_t k = 0; k < c.dim(); k++) {
            es[c.answer(k)] += full[k];
        }
        return Povm::from_elements(std::move(es));
    };
    return joint_table(rho, coarse(ca), coarse(cb));
}

Outcome criterion7() {
    auto start = Clock::now();
    auto [ca, cb] = game_circuits(2);
    HirschModel model = HirschModel::make(1.0 / 3.0, qubit_state("ket0"), qubit_state("ket0"));
    CircuitParty alice = CircuitParty::build(ca, qubit_state("ket0"));
    CircuitParty bob = CircuitParty::build(cb, qubit_state("ket0"));
    CoupledConfig cfg;
    cfg.samples = 1000000;
    cfg.seed = 7;
    cfg.encoding_ell = 4;
    cfg.encoding_backend = ScalarBackend::Extended;
    cfg.estimator.ell = 16;
    cfg.answer_level = true;
    CoupledResult r = run_coupled_simulation(cfg, alice, bob);
    auto target = answer_law(model.target_state(), ca, cb);
    auto realized = answer_law(model.realized_state(), ca, cb);
    double tv = r.efficient.total_variation(target) / 2;
    double gap = tv_distance(target, realized);
    detail("answers on output qubits {0, 1} of the criterion-6 circuits, %llu samples, %.1f s",
           (unsigned long long)cfg.samples, seconds_since(start));
    detail("TV vs the quantum law on the target state %.5f; exact target-vs-realized gap %.5f; TV vs realized %.5f",
           tv, gap, r.efficient.total_variation(realized) / 2);
    Outcome o;
    o.pass = tv <= 0.01;
    o.summary = format("TV %.4f", tv);
    if (gap > 0.01) {
        o.expected_failure = format("the players realize a different shared state; exact gap %.4f", gap);
    }
    return o;
}

Outcome criterion8() {
    auto start = Clock::now();
    RspOptions opt;
    opt.n = 12;
    opt.ell = 12;
    opt.physics = ProverPhysics::ClawSearch;
    RspSummary s = run_rsp_session(opt, 10000, 8, 1, false);
    std::vector<double> labels(6, 0.0), two_to_one(4, 0.0), injective(2, 0.0);
    for (size_t k = 0; k < 6; k++) {
        labels[k] = (double)(s.labels[0][k] + s.labels[1][k]);
    }
    for (size_t k = 0; k < 4; k++) {
        two_to_one[k] = (double)s.labels[0][k + 2];
    }
    for (size_t k = 0; k < 2; k++) {
        injective[k] = (double)s.labels[1][k];
    }
    auto [chi_u, p_u] = chi_square_test(labels, std::vector<double>(6, 1.0 / 6));
    auto [chi_law, p_law] = chi_square_test(labels, {0.25, 0.25, 0.125, 0.125, 0.125, 0.125});
    auto [chi_0, p_0] = chi_square_test(two_to_one, std::vector<double>(4, 0.25));
    auto [chi_1, p_1] = chi_square_test(injective, {0.5, 0.5});
    double opt_q = 0.5 + 0.5 / std::numbers::sqrt2;
    double rate = s.qrac.rate();
    double sigma = std::sqrt(opt_q * (1 - opt_q) / (double)s.qrac.trials());
    detail("%llu rounds at n = 12: %llu aborts", (unsigned long long)s.rounds, (unsigned long long)s.aborts);
    detail("answer-round labels %g %g %g %g %g %g", labels[0], labels[1], labels[2], labels[3], labels[4], labels[5]);
    detail("six-way uniformity: chi2 %.1f, p = %.3g", chi_u, p_u);
    detail("against the exact law (1/4, 1/4, 1/8, 1/8, 1/8, 1/8): chi2 %.2f, p = %.3g", chi_law, p_law);
    detail("within two-to-one keys: p = %.3g; within injective keys: p = %.3g", p_0, p_1);
    detail("QRAC rate %.4f over %llu trials, target %.4f +- %.4f (3 sigma); %.1f s", rate,
           (unsigned long long)s.qrac.trials(), opt_q, 3 * sigma, seconds_since(start));
    bool side_checks = s.aborts == 0 && std::abs(rate - opt_q) <= 3 * sigma && p_law > 0.001 && p_0 > 0.001 &&
                       p_1 > 0.001;
    Outcome o;
    o.pass = side_checks && p_u > 0.001;
    o.summary = format("%llu aborts, six-way p = %.3g, QRAC %.4f", (unsigned long long)s.aborts, p_u, rate);
    if (side_checks) {
        o.expected_failure =
            "a uniform key-type coin puts 1/4 on each computational label and 1/8 on each equatorial one";
    }
    return o;
}

Outcome criterion9() {
    const int seeds = 30;
    DensityMatrix rho = werner(0.9);
    Witness w = ppt_witness(rho);
    EdqcGameOptions opt;
    opt.delta = 0.2;
    auto count = [&](const SharedResource &res, const EdqcStrategy &a, const EdqcStrategy &b, Verdict want) {
        int hits = 0;
        for (int seed = 0; seed < seeds; seed++) {
            opt.seed = (uint64_t)seed;
            hits += run_edqc_game(res, w, opt, a, b).verdict == want;
        }
        return hits;
    };
    auto share = EdqcStrategy::use_share();
    int entangled = count(rho, share, share, Verdict::Entangled);
    detail("honest ideal-EDQC players on werner(0.9): ENTANGLED in %d/%d seeds", entangled, seeds);
    bool pass = entangled >= 24;

    struct Case {
        std::string name;
        SeparableSource source;
        EdqcStrategy a;
        EdqcStrategy b;
    };
    auto s00 = SeparableSource::product(qubit_state("ket0"), qubit_state("ket0"));
    auto spi = SeparableSource::product(qubit_state("plus"), qubit_state("plus_i"));
    std::vector<Case> cases = {
        {"shares of I/2 (x) I/2", SeparableSource::product(qubit_state("mixed"), qubit_state("mixed")), share, share},
        {"shares of |00>", s00, share, share},
        {"shares of |+>|+i>", spi, share, share},
        {"fixed |0> and |+i> auxiliaries", s00, EdqcStrategy::fixed("ket0", qubit_state("ket0")),
         EdqcStrategy::fixed("plus_i", qubit_state("plus_i"))},
        {"fixed |-> auxiliaries", s00, EdqcStrategy::fixed("minus", qubit_state("minus")),
         EdqcStrategy::fixed("minus", qubit_state("minus"))},
    };
    EightTable b8 = edqc_beta(w.beta);
    for (const auto &c : cases) {
        EightTable table = edqc_separable_table(c.source, c.a, c.b);
        double exact = 0;
        for (size_t s = 0; s < EDQC_INPUTS; s++) {
            for (size_t t = 0; t < EDQC_INPUTS; t++) {
                exact += b8[s][t] * table[s][t];
            }
        }
        int rejected = count(c.source, c.a, c.b, Verdict::NotEntangled);
        detail("separable mode, %s: exact score %+.5f, NOT-ENTANGLED in %d/%d seeds", c.name.c_str(), exact, rejected,
               seeds);
        pass = pass && rejected >= 24;
    }

    Rng rng(9);
    double worst = 0;
    for (int k = 0; k < 100; k++) {
        Matrix m = Matrix::Zero(4, 4);
        for (int j = 0; j < 3; j++) {
            m += rng.uniform() * outer(haar_state(4, rng).amplitudes());
        }
        DensityMatrix r = DensityMatrix::from_matrix(Matrix(m / m.trace().real()));
        DensityMatrix tau = six_state(BellTestCircuit::state_index(rng.below(EDQC_INPUTS)));
        DensityMatrix omega = six_state(BellTestCircuit::state_index(rng.below(EDQC_INPUTS)));
        worst = std::max(worst, std::abs(sequential_joint_prob(r, tau, omega) - direct_joint_prob(r, tau, omega)));
    }
    detail("sequential vs joint trace over 100 random triples: max difference %.3g", worst);
    Outcome o;
    o.pass = pass && worst <= 1e-10;
    o.summary = format("honest %d/%d ENTANGLED, path difference %.2g", entangled, seeds, worst);
    return o;
}

Outcome criterion10() {
    auto start = Clock::now();
    auto suites = nelsim::cli::run_selftest(1);
    bool pass = true;
    for (const auto &s : suites) {
        detail("%s: %s (%llu checks, %.2f s)", s.name.c_str(), s.passed ? "green" : "red",
               (unsigned long long)s.checks, s.seconds);
        for (const auto &f : s.failures) {
            detail("  failed: %s", f.c_str());
        }
        pass = pass && s.passed;
    }
    double elapsed = seconds_since(start);
    Outcome o;
    o.pass = pass && elapsed < 300;
    o.summary = format("%zu suites, %.2f s", suites.size(), elapsed);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                            criterion5, criterion6, criterion7, criterion8,
                                                            criterion9, criterion10};
    int unexpected = 0;
    for (size_t k = 0; k < criteria.size(); k++) {
        std::printf("criterion %zu\n", k + 1);
        std::fflush(stdout);
        Outcome o;
        try {
            o = criteria[k]();
        } catch (const std::exception &e) {
            o.pass = false;
            o.summary = std::string("error: ") + e.what();
        }
        std::string status = o.pass ? "PASS" : "FAIL";
        if (!o.pass && !o.expected_failure.empty()) {
            status += " (expected: " + o.expected_failure + ")";
        }
        bool as_expected = o.pass == o.expected_failure.empty();
        unexpected += !as_expected;
        std::printf("[criterion %zu] %s: %s%s\n", k + 1, status.c_str(), o.summary.c_str(),
                    as_expected ? "" : " [UNEXPECTED]");
        std::fflush(stdout);
    }
    std::printf("%d criteria deviate from their expected status\n", unexpected);
    return unexpected == 0 ? 0 : 1;
}
