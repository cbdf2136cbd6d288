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

#ifndef NELSIM_QCORE_RNG_H
#define NELSIM_QCORE_RNG_H

#include <cstdint>
#include <limits>
#include <random>

namespace nelsim {

uint64_t splitmix64(uint64_t x);

/// Seeded, stream-addressable random source.
///
/// Every draw is derived from std::mt19937_64 (whose output sequence is fixed by the standard) with hand-written
/// transformations, so identical (seed, stream) pairs replay identically on every platform.
class Rng {
   public:
    using result_type = uint64_t;

    explicit Rng(uint64_t seed, uint64_t stream = 0);

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }
    result_type operator()() {
        return engine_();
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform double in (0, 1).
    double uniform_open();
    bool bernoulli(double p);
    /// Uniform integer in [0, n).
    uint64_t below(uint64_t n);
    /// Standard normal deviate (Box-Muller).
    double gaussian();

    /// An independent generator addressed by (seed, hash(stream, child)).
    Rng fork(uint64_t child) const;

    uint64_t seed() const {
        return seed_;
    }
    uint64_t stream() const {
        return stream_;
    }

   private:
    uint64_t seed_;
    uint64_t stream_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0;
};

}  // namespace nelsim

#endif
