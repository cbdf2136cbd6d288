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


#include "nelsim/certify/certification.h"

#include <cmath>

#include "nelsim/qcore/errors.h"
#include "nelsim/qcore/linalg.h"
#include "nelsim/qcore/named_states.h"
#include "nelsim/qcore/ops.h"
#include "nelsim/qcore/povm.h"

using namespace nelsim;

namespace {

constexpr uint64_t CERTIFY_DOMAIN = 0xce71;
constexpr double PATH_TOLERANCE = 1e-10;

const Matrix &phi_plus_projector() {
    static const Matrix p = bell(BellState::PhiPlus).matrix();
    return p;
}

void check_qubit(const DensityMatrix &m, const char *what) {
    if (m.dim() != 2) {
        throw ValidationError(std::string(what) + " must be a single-qubit state");
    }
}

void check_pair(const DensityMatrix &rho) {
    if (rho.dim() != 4) {
        throw ValidationError("shared state must be a two-qubit state");
    }
}

double clamp01(double x) {
    return std::clamp(x, 0.0, 1.0);
}

}  // namespace

double nelsim::phi_plus_prob(const DensityMatrix &input, const DensityMatrix &share) {
    check_qubit(input, "input");
    check_qubit(share, "share");
    return clamp01(trace_product(phi_plus_projector(), kron(input.matrix(), share.matrix())).real());
}

ConditionedShare nelsim::condition_on_alice(const DensityMatrix &rho, const DensityMatrix &tau) {
    check_pair(rho);
    check_qubit(tau, "tau");
    Matrix state = kron(tau.matrix(), rho.matrix());
    Matrix pass = kron(phi_plus_projector(), Matrix::Identity(2, 2));
    Matrix fail = Matrix::Identity(8, 8) - pass;
    ConditionedShare out;
    std::array<const Matrix *, 2> proj{&fail, &pass};
    std::array<double, 2> prob{};
    for (int a = 0; a < 2; a++) {
        Matrix post = *proj[a] * state * *proj[a];
        prob[a] = post.trace().real();
        if (prob[a] > 0) {
            Matrix bob = partial_trace(post, 0b100) / prob[a];
            out.bob_state[a] = DensityMatrix::from_matrix(Matrix((bob + bob.adjoint()) / 2));
        }
    }
    out.p_one = clamp01(prob[1]);
    return out;
}

double nelsim::direct_joint_prob(const DensityMatrix &rho, const DensityMatrix &tau, const DensityMatrix &omega) {
    check_pair(rho);
    check_qubit(tau, "tau");
    check_qubit(omega, "omega");
    Matrix both = kron(phi_plus_projector(), phi_plus_projector());
    return clamp01(trace_product(both, kron(kron(tau.matrix(), rho.matrix()), omega.matrix())).real());
}

double nelsim::sequential_joint_prob(const DensityMatrix &rho, const DensityMatrix &tau, const DensityMatrix &omega) {
    check_qubit(omega, "omega");
    ConditionedShare c = condition_on_alice(rho, tau);
    double sequential = c.p_one > 0 ? c.p_one * phi_plus_prob(c.bob_state[1], omega) : 0.0;
    double direct = direct_joint_prob(rho, tau, omega);
    if (std::abs(sequential - direct) > PATH_TOLERANCE) {
        throw Error("sequential and joint computations disagree: " + std::to_string(sequential) + " vs " +
                    std::to_string(direct));
    }
    return sequential;
}

ProverFactory nelsim::honest_prover_factory() {
    return [](ProverPhysics physics) { return std::make_unique<HonestProver>(physics); };
}

void InstanceTally::add(const RspTranscript &t) {
    last_round[(size_t)t.path.back()]++;
    if (t.aborted()) {
        aborts++;
        abort_reasons[(size_t)t.abort]++;
    }
}

nlohmann::json InstanceTally::to_json() const {
    nlohmann::json j;
    j["aborts"] = aborts;
    nlohmann::json rounds = nlohmann::json::object();
    for (size_t k = 0; k < last_round.size(); k++) {
        rounds[round_tag_name((RoundTag)k)] = last_round[k];
    }
    j["last_round"] = rounds;
    nlohmann::json reasons = nlohmann::json::object();
    for (size_t k = 1; k < abort_reasons.size(); k++) {
        reasons[abort_reason_name((AbortReason)k)] = abort_reasons[k];
    }
    j["abort_reasons"] = reasons;
    return j;
}

nlohmann::json CertificationReport::to_json() const {
    nlohmann::json j;
    j["planned_repetitions"] = planned;
    j["executed_repetitions"] = executed;
    j["alice_instances"] = alice.to_json();
    j["bob_instances"] = bob.to_json();
    j["first_abort"] = first_abort ? nlohmann::json(*first_abort) : nlohmann::json(nullptr);
    j["collected"] = collected();
    j["score"] = score.to_json();
    j["verdict"] = verdict_name(verdict);
    if (!tuples.empty()) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto &t : tuples) {
            list.push_back({t.tau, t.a, t.omega, t.b});
        }
        j["tuples"] = list;
    }
    return j;
}

uint64_t nelsim::certification_repetitions(double delta, const Witness &witness) {
    double both = ANSWER_ROUND_PROBABILITY * ANSWER_ROUND_PROBABILITY;
    return (uint64_t)std::ceil((double)repetitions(delta, witness.eta, witness.beta) / both);
}

CertificationReport nelsim::run_certification(const SharedResource &resource, const Witness &witness,
                                              const CertifyOptions &options, const ProverFactory &alice_prover,
                                              const ProverFactory &bob_prover) {
    const auto *rho = std::get_if<DensityMatrix>(&resource);
    const auto *source = std::get_if<SeparableSource>(&resource);
    if (rho) {
        check_pair(*rho);
    }
    std::vector<double> weights = source ? source->weights() : std::vector<double>{};

    std::array<std::optional<ConditionedShare>, 6> conditioned;
    auto conditioned_for = [&](size_t tau) -> const ConditionedShare & {
        if (!conditioned[tau]) {
            conditioned[tau] = condition_on_alice(*rho, six_state(tau));
        }
        return *conditioned[tau];
    };

    RspOptions ro;
    ro.n = options.tcf_n;
    ro.ell = options.tcf_n;
    ro.physics = options.physics;

    CertificationReport report;
    report.planned = options.repetitions ? options.repetitions : certification_repetitions(options.delta, witness);
    Rng base(options.seed, CERTIFY_DOMAIN);
    for (uint64_t i = 0; i < report.planned; i++) {
        Rng rng = base.fork(i);
        auto pa = alice_prover(options.physics);
        auto pb = bob_prover(options.physics);
        RspTranscript ta = run_rsp_instance(ro, *pa, rng);
        RspTranscript tb = run_rsp_instance(ro, *pb, rng);
        report.executed++;
        report.alice.add(ta);
        report.bob.add(tb);
        if (ta.aborted() || tb.aborted()) {
            report.first_abort = i;
            break;
        }
        if (!ta.reached(RoundTag::R3b) || !tb.reached(RoundTag::R3b)) {
            continue;
        }
        auto qa = pa->qubit(), qb = pb->qubit();
        size_t in_a = qa ? qa->six_state_index() : *ta.label;
        size_t in_b = qb ? qb->six_state_index() : *tb.label;
        int a = 0, b = 0;
        if (rho) {
            const ConditionedShare &c = conditioned_for(in_a);
            a = rng.bernoulli(c.p_one) ? 1 : 0;
            b = rng.bernoulli(phi_plus_prob(six_state(in_b), c.bob_state[(size_t)a])) ? 1 : 0;
        } else {
            const SeparableComponent &comp = source->components()[sample_index(weights, rng)];
            a = rng.bernoulli(phi_plus_prob(six_state(in_a), comp.sigma_a)) ? 1 : 0;
            b = rng.bernoulli(phi_plus_prob(six_state(in_b), comp.sigma_b)) ? 1 : 0;
        }
        report.score.add(RoundOutcome{*ta.label, *tb.label, a, b});
        if (options.keep_tuples) {
            report.tuples.push_back(CollectedTuple{*ta.label, a, *tb.label, b});
        }
    }
    report.score.finalize(witness.beta);
    report.verdict = report.first_abort ? Verdict::NotEntangled : report.score.verdict;
    return report;
}
