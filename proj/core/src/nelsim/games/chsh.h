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

#ifndef NELSIM_GAMES_CHSH_H
#define NELSIM_GAMES_CHSH_H

#include <array>
#include <cstdint>
#include <nlohmann/json.hpp>

#include "nelsim/qcore/rng.h"

namespace nelsim {

/// A deterministic classical player: the answer bit for question 0 and for question 1.
using ClassicalPlayer = std::array<int, 2>;

/// Exact win probability of a deterministic pair over uniform questions (win iff a xor b = x and y).
double chsh_classical_value(const ClassicalPlayer &a, const ClassicalPlayer &b);
/// Maximum exact win probability over all 16 deterministic pairs.
double chsh_classical_optimum();
/// P[a = b] for measurements at angles alpha, beta on |phi+>: cos^2(alpha - beta).
double chsh_agreement(double alpha, double beta);
/// Exact win probability of the angle strategy (0, pi/4) vs (pi/8, -pi/8) on |phi+>.
double chsh_quantum_value();

struct ChshResult {
    uint64_t rounds = 0;
    uint64_t classical_wins = 0;
    uint64_t quantum_wins = 0;

    double classical_rate() const {
        return rounds ? (double)classical_wins / (double)rounds : 0.0;
    }
    double quantum_rate() const {
        return rounds ? (double)quantum_wins / (double)rounds : 0.0;
    }
    nlohmann::json to_json() const;
};

/// Plays `rounds` rounds of the a = b = 0 classical strategy and of the optimal quantum strategy.
ChshResult chsh_demo(uint64_t seed, uint64_t rounds, unsigned workers = 1);

}  // namespace nelsim

#endif
