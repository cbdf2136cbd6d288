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

#include "nelsim/qcore/rng.h"

#include <cmath>
#include <numbers>

using namespace nelsim;

uint64_t nelsim::splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng::Rng(uint64_t seed, uint64_t stream)
    : seed_(seed), stream_(stream), engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL))) {
}

double Rng::uniform() {
    return (double)(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() {
    return ((double)(engine_() >> 12) + 0.5) * 0x1.0p-52;
}

bool Rng::bernoulli(double p) {
    return uniform() < p;
}

uint64_t Rng::below(uint64_t n) {
    if (n == 0) {
        return 0;
    }
    uint64_t limit = max() - max() % n;
    while (true) {
        uint64_t v = engine_();
        if (v < limit) {
            return v % n;
        }
    }
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double r = std::sqrt(-2.0 * std::log(uniform_open()));
    double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

Rng Rng::fork(uint64_t child) const {
    return Rng(seed_, splitmix64(stream_ * 0x9E3779B97F4A7C15ULL + child + 1));
}
