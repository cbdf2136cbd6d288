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


#ifndef NELSIM_CERTIFY_CERTIFICATION_H
#define NELSIM_CERTIFY_CERTIFICATION_H

#include <cstdint>
#include <functional>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <vector>

#include "nelsim/games/sqg.h"
#include "nelsim/rsp/rsp.h"
#include "nelsim/witness/witness.h"

namespace nelsim {

/// P[a = 1, b = 1] for phi+ projections of (tau, rho_A) and (rho_B, omega), by conditioning on Alice's outcome.
/// Cross-checks against the single 16-dimensional trace and throws Error when they differ by more than 1e-10.
double sequential_joint_prob(const DensityMatrix &rho, const DensityMatrix &tau, const DensityMatrix &omega);
/// The same probability as one trace over (tau, rho, omega).
double direct_joint_prob(const DensityMatrix &rho, const DensityMatrix &tau, const DensityMatrix &omega);

/// Alice's phi+ outcome law on (tau, rho_A) and Bob's reduced state conditioned on each outcome.
struct ConditionedShare {
    double p_one = 0;
    /// Bob's share after Alice answers 0 and 1 (maximally mixed placeholder for an impossible outcome).
    std::array<DensityMatrix, 2> bob_state{DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(2)};
};
ConditionedShare condition_on_alice(const DensityMatrix &rho, const DensityMatrix &tau);

/// Probability that the phi+ projection of (input, share) succeeds.
double phi_plus_prob(const DensityMatrix &input, const DensityMatrix &share);

using ProverFactory = std::function<std::unique_ptr<RspProver>(ProverPhysics physics)>;
ProverFactory honest_prover_factory();

struct CertifyOptions {
    double delta = 0.2;
    unsigned tcf_n = 12;
    /// Total repetitions; 0 selects ceil(games repetition count / P[both instances reach R3b]).
    uint64_t repetitions = 0;
    uint64_t seed = 0;
    ProverPhysics physics = ProverPhysics::Oracle;
    /// Keep every collected tuple in the report.
    bool keep_tuples = false;
};

struct CollectedTuple {
    size_t tau = 0;
    int a = 0;
    size_t omega = 0;
    int b = 0;
};

struct InstanceTally {
    uint64_t aborts = 0;
    std::array<uint64_t, 5> last_round{};
    std::array<uint64_t, 6> abort_reasons{};

    void add(const RspTranscript &t);
    nlohmann::json to_json() const;
};

struct CertificationReport {
    uint64_t planned = 0;
    uint64_t executed = 0;
    InstanceTally alice;
    InstanceTally bob;
    std::optional<uint64_t> first_abort;
    ScoreReport score;
    std::vector<CollectedTuple> tuples;
    Verdict verdict = Verdict::NotEntangled;

    uint64_t collected() const {
        return score.rounds;
    }
    nlohmann::json to_json() const;
};

/// Probability that one honest instance reaches the answer-collection round.
constexpr double ANSWER_ROUND_PROBABILITY = 0.25;

uint64_t certification_repetitions(double delta, const Witness &witness);

/// Repeats two independent protocol instances; when both reach answer collection the players answer their prepared
/// qubits against their shares by phi+ projection, Alice first and Bob on the conditioned share.
CertificationReport run_certification(const SharedResource &resource, const Witness &witness,
                                      const CertifyOptions &options,
                                      const ProverFactory &alice_prover = honest_prover_factory(),
                                      const ProverFactory &bob_prover = honest_prover_factory());

}  // namespace nelsim

#endif
