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


#ifndef NELSIM_POSTSIM_SIM_H
#define NELSIM_POSTSIM_SIM_H

#include <cstdint>
#include <vector>

#include "nelsim/lhv/lhv.h"
#include "nelsim/postsim/circuit.h"
#include "nelsim/postsim/dotprod.h"

namespace nelsim {

/// A question-specialized answer circuit with its eigenpairs and forward-simulated outcome laws.
class CircuitParty {
   public:
    static CircuitParty build(const Circuit &circuit, const DensityMatrix &sigma);

    const Circuit &circuit() const {
        return circuit_;
    }
    const std::vector<EigenPair> &eigenpairs() const {
        return pairs_;
    }
    /// Laws over outcomes with nonzero POVM weight, ascending; kets are the eigenvectors.
    const LocalResponse &response() const {
        return response_;
    }
    /// The same response computed by traces against the circuit's fine-grained POVM.
    LocalResponse ideal_response() const;
    const EigenPair &pair(size_t index) const {
        return pairs_[response_.labels[index]];
    }

   private:
    CircuitParty(Circuit circuit, DensityMatrix sigma) : circuit_(std::move(circuit)), sigma_(std::move(sigma)) {
    }
    Circuit circuit_;
    DensityMatrix sigma_;
    std::vector<EigenPair> pairs_;
    LocalResponse response_;
};

struct SimAnswer {
    PartyAnswer answer;
    uint64_t outcome = 0;
    /// The estimate used by the selected branch, or -1 when the branch needs none.
    double estimate = -1;
};

/// Alice's circuit-backed player; only the selected branch's dot product is estimated.
SimAnswer alice_sim(double q, const CircuitParty &party, const DotTarget &lambda_hat, const SharedCoins &shared,
                    const AliceCoins &coins, const DotProductOptions &opts, Rng &rng);
/// Bob's circuit-backed player.
SimAnswer bob_sim(double q, const CircuitParty &party, const DotTarget &lambda_hat, const SharedCoins &shared,
                  const BobCoins &coins, const DotProductOptions &opts, Rng &rng);

struct CoupledConfig {
    double q = 1.0 / 3.0;
    uint64_t samples = 0;
    uint64_t seed = 0;
    unsigned workers = 1;
    unsigned encoding_ell = 1;
    ScalarBackend encoding_backend = ScalarBackend::Float;
    DotProductOptions estimator;
    /// Tabulate answers (output-qubit bits) instead of full outcomes.
    bool answer_level = false;
};

struct CoupledResult {
    LhvOutcomeTable efficient;
    LhvOutcomeTable ideal;
    uint64_t disagreements = 0;
    uint64_t estimates = 0;
};

/// Runs the ideal players on the exact shared state and the circuit-backed players on its encoding, with identical
/// coins per sample.
CoupledResult run_coupled_simulation(const CoupledConfig &config, const CircuitParty &alice,
                                     const CircuitParty &bob);

}  // namespace nelsim

#endif
