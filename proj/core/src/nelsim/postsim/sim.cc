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


#include "nelsim/postsim/sim.h"

#include "nelsim/qcore/errors.h"
#include "nelsim/qcore/parallel.h"

using namespace nelsim;

namespace {

constexpr uint64_t COUPLED_CHUNK = 4096;
constexpr uint64_t COUPLED_DOMAIN = 0x9051;

std::vector<double> pad_law(const std::vector<double> &full, const std::vector<uint64_t> &labels) {
    std::vector<double> law;
    law.reserve(labels.size());
    for (uint64_t a : labels) {
        law.push_back(full[a]);
    }
    return law;
}

DensityMatrix basis_density(size_t c0) {
    return DensityMatrix::from_pure(PureState::basis(2, c0));
}

}  // namespace

CircuitParty CircuitParty::build(const Circuit &circuit, const DensityMatrix &sigma) {
    if (sigma.dim() != 2) {
        throw ValidationError("party sigma must be a qubit state");
    }
    CircuitParty p(circuit, sigma);
    p.pairs_ = circuit_eigenpairs(circuit);
    static const Vector minus = [] {
        Vector v(2);
        v << M_SQRT1_2, -M_SQRT1_2;
        return v;
    }();
    LocalResponse &r = p.response_;
    for (uint64_t a = 0; a < p.pairs_.size(); a++) {
        const EigenPair &e = p.pairs_[a];
        if (e.is_zero()) {
            continue;
        }
        const Vector &k = e.psi->amplitudes();
        r.labels.push_back(a);
        r.weights.push_back(e.eta);
        r.kets.push_back(k);
        r.zero_overlap.push_back(std::norm(k(0)));
        r.minus_overlap.push_back(std::norm(minus.dot(k)));
    }
    for (size_t c0 = 0; c0 < 2; c0++) {
        r.input_law[c0] = pad_law(outcome_law(circuit, basis_density(c0)), r.labels);
    }
    r.sigma_law = pad_law(outcome_law(circuit, sigma), r.labels);
    return p;
}

LocalResponse CircuitParty::ideal_response() const {
    return LocalResponse::from_fine(circuit_povm(circuit_), sigma_);
}

SimAnswer nelsim::alice_sim(double q, const CircuitParty &party, const DotTarget &lambda_hat,
                            const SharedCoins &shared, const AliceCoins &coins, const DotProductOptions &opts,
                            Rng &rng) {
    if (q < 0 || q > 1.0 / 3.0) {
        throw ValidationError("Alice's simulation needs q in [0, 1/3]");
    }
    const LocalResponse &r = party.response();
    SimAnswer out;
    PartyAnswer &ans = out.answer;
    ans.first_draw = draw_first_outcome(r, coins.input, coins.outcome);
    ans.branch = alice_branch(q, shared.branch);
    size_t k = ans.first_draw;
    const EigenPair &pair = party.pair(k);
    static const DotTarget zero = DotTarget::ket0();
    static const DotTarget minus = DotTarget::minus();
    switch (ans.branch) {
        case 0:
            out.estimate = dot_product_with_eigenvector(pair, lambda_hat, opts, rng).value;
            ans.kept = out.estimate < 0.5;
            break;
        case 1:
            out.estimate = dot_product_with_eigenvector(pair, zero, opts, rng).value;
            ans.kept = coins.c2 < out.estimate;
            break;
        default:
            out.estimate = dot_product_with_eigenvector(pair, minus, opts, rng).value;
            ans.kept = coins.c3 < out.estimate;
            break;
    }
    ans.index = ans.kept ? k : sample_index(r.sigma_law, coins.resample);
    out.outcome = r.labels[ans.index];
    return out;
}

SimAnswer nelsim::bob_sim(double q, const CircuitParty &party, const DotTarget &lambda_hat,
                          const SharedCoins &shared, const BobCoins &coins, const DotProductOptions &opts, Rng &rng) {
    if (q < 0 || q > 0.5) {
        throw ValidationError("Bob's simulation needs q in [0, 1/2]");
    }
    const LocalResponse &r = party.response();
    SimAnswer out;
    PartyAnswer &ans = out.answer;
    ans.first_draw = draw_first_outcome(r, coins.input, coins.outcome);
    ans.branch = bob_branch(q, shared.branch);
    size_t k = ans.first_draw;
    if (ans.branch == 0) {
        out.estimate = dot_product_with_eigenvector(party.pair(k), lambda_hat, opts, rng).value;
        ans.kept = coins.c1 < out.estimate;
    } else {
        ans.kept = coins.c2 < 0.5;
    }
    ans.index = ans.kept ? k : sample_index(r.sigma_law, coins.resample);
    out.outcome = r.labels[ans.index];
    return out;
}

CoupledResult nelsim::run_coupled_simulation(const CoupledConfig &config, const CircuitParty &alice,
                                             const CircuitParty &bob) {
    const Circuit &ca = alice.circuit();
    const Circuit &cb = bob.circuit();
    size_t na = config.answer_level ? ca.answer_count() : ca.dim();
    size_t nb = config.answer_level ? cb.answer_count() : cb.dim();
    auto label_a = [&](uint64_t outcome) { return config.answer_level ? ca.answer(outcome) : outcome; };
    auto label_b = [&](uint64_t outcome) { return config.answer_level ? cb.answer(outcome) : outcome; };
    const LocalResponse &ra = alice.response();
    const LocalResponse &rb = bob.response();
    auto body = [&](Rng &rng, uint64_t count, CoupledResult &acc) {
        acc.efficient = LhvOutcomeTable::make(na, nb);
        acc.ideal = LhvOutcomeTable::make(na, nb);
        for (uint64_t i = 0; i < count; i++) {
            SharedLambda lambda = approx_haar(config.encoding_ell, config.encoding_backend, rng);
            SharedCoins shared = draw_shared_coins(rng);
            AliceCoins coins_a = draw_alice_coins(rng);
            BobCoins coins_b = draw_bob_coins(rng);
            Rng estimator_rng = rng.fork(i);
            Vector exact = lambda.amplitudes();
            DotTarget target = DotTarget::from_lambda(lambda);

            PartyAnswer ia = alice_sim_ideal(config.q, ra, exact, shared, coins_a);
            PartyAnswer ib = bob_sim_ideal(config.q, rb, exact, shared, coins_b);
            SimAnswer ea = alice_sim(config.q, alice, target, shared, coins_a, config.estimator, estimator_rng);
            SimAnswer eb = bob_sim(config.q, bob, target, shared, coins_b, config.estimator, estimator_rng);
            acc.estimates += (ea.estimate >= 0 ? 1 : 0) + (eb.estimate >= 0 ? 1 : 0);

            uint64_t ideal_a = label_a(ra.labels[ia.index]), ideal_b = label_b(rb.labels[ib.index]);
            uint64_t eff_a = label_a(ea.outcome), eff_b = label_b(eb.outcome);
            acc.ideal.add(ideal_a, ideal_b);
            acc.efficient.add(eff_a, eff_b);
            if (ideal_a != eff_a || ideal_b != eff_b) {
                acc.disagreements++;
            }
        }
    };
    auto merge = [](CoupledResult &into, const CoupledResult &part) {
        into.efficient.merge(part.efficient);
        into.ideal.merge(part.ideal);
        into.disagreements += part.disagreements;
        into.estimates += part.estimates;
    };
    return run_chunked<CoupledResult>(config.samples, COUPLED_CHUNK, config.seed, COUPLED_DOMAIN, config.workers,
                                      body, merge);
}
