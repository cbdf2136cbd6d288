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

#include "nelsim/games/chsh.h"

#include <cmath>
#include <numbers>

#include "nelsim/qcore/errors.h"
#include "nelsim/qcore/parallel.h"

namespace nelsim {

namespace {

constexpr uint64_t CHSH_DOMAIN = 0xC454'0001;
constexpr uint64_t CHSH_CHUNK = 1 << 16;
constexpr double ALICE_ANGLES[2] = {0, std::numbers::pi / 4};
constexpr double BOB_ANGLES[2] = {std::numbers::pi / 8, -std::numbers::pi / 8};

bool wins(int x, int y, int a, int b) {
    return (a ^ b) == (x & y);
}

}  // namespace

double chsh_classical_value(const ClassicalPlayer &a, const ClassicalPlayer &b) {
    int w = 0;
    for (int x = 0; x < 2; x++) {
        for (int y = 0; y < 2; y++) {
            w += wins(x, y, a[x], b[y]);
        }
    }
    return w / 4.0;
}

double chsh_classical_optimum() {
    double best = 0;
    for (int ma = 0; ma < 4; ma++) {
        for (int mb = 0; mb < 4; mb++) {
            ClassicalPlayer a{ma & 1, ma >> 1};
            ClassicalPlayer b{mb & 1, mb >> 1};
            best = std::max(best, chsh_classical_value(a, b));
        }
    }
    return best;
}

double chsh_agreement(double alpha, double beta) {
    double c = std::cos(alpha - beta);
    return c * c;
}

double chsh_quantum_value() {
    double w = 0;
    for (int x = 0; x < 2; x++) {
        for (int y = 0; y < 2; y++) {
            double agree = chsh_agreement(ALICE_ANGLES[x], BOB_ANGLES[y]);
            w += (x & y) ? 1 - agree : agree;
        }
    }
    return w / 4;
}

nlohmann::json ChshResult::to_json() const {
    return {{"rounds", rounds},
            {"classical_wins", classical_wins},
            {"quantum_wins", quantum_wins},
            {"classical_rate", classical_rate()},
            {"quantum_rate", quantum_rate()}};
}

ChshResult chsh_demo(uint64_t seed, uint64_t rounds, unsigned workers) {
    if (rounds < 1) {
        throw ValidationError("rounds must be at least 1");
    }
    ChshResult result = run_chunked<ChshResult>(
        rounds,
        CHSH_CHUNK,
        seed,
        CHSH_DOMAIN,
        workers,
        [](Rng &rng, uint64_t count, ChshResult &acc) {
            for (uint64_t i = 0; i < count; i++) {
                int x = (int)rng.below(2);
                int y = (int)rng.below(2);
                acc.classical_wins += wins(x, y, 0, 0);
                // Alice's outcome is a uniform bit; Bob agrees with probability cos^2 of the angle gap.
                int a = (int)rng.below(2);
                int b = rng.uniform() < chsh_agreement(ALICE_ANGLES[x], BOB_ANGLES[y]) ? a : 1 - a;
                acc.quantum_wins += wins(x, y, a, b);
            }
            acc.rounds += count;
        },
        [](ChshResult &total, const ChshResult &part) {
            total.rounds += part.rounds;
            total.classical_wins += part.classical_wins;
            total.quantum_wins += part.quantum_wins;
        });
    return result;
}

}  // namespace nelsim
