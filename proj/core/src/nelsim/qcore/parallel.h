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

#ifndef NELSIM_QCORE_PARALLEL_H
#define NELSIM_QCORE_PARALLEL_H

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

#include "nelsim/qcore/rng.h"

namespace nelsim {

/// Monte Carlo work split into fixed-size chunks, each drawing from its own stream Rng(seed, domain).fork(chunk).
///
/// `body(rng, count, acc)` fills a default-constructed accumulator; accumulators are merged in chunk order with
/// `merge(total, part)`, so the result depends only on (seed, domain, total, chunk) and never on `workers`.
template <typename Acc, typename Body, typename Merge>
Acc run_chunked(
    uint64_t total, uint64_t chunk, uint64_t seed, uint64_t domain, unsigned workers, Body body, Merge merge) {
    if (chunk == 0) {
        chunk = 1;
    }
    uint64_t num_chunks = (total + chunk - 1) / chunk;
    std::vector<Acc> parts(num_chunks);
    Rng base(seed, domain);
    auto run_one = [&](uint64_t c) {
        Rng rng = base.fork(c);
        uint64_t count = std::min(chunk, total - c * chunk);
        body(rng, count, parts[c]);
    };
    if (workers <= 1 || num_chunks <= 1) {
        for (uint64_t c = 0; c < num_chunks; c++) {
            run_one(c);
        }
    } else {
        std::atomic<uint64_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; w++) {
            threads.emplace_back([&, w] {
                try {
                    for (uint64_t c = next++; c < num_chunks; c = next++) {
                        run_one(c);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto &t : threads) {
            t.join();
        }
        for (auto &e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }
    Acc result{};
    for (auto &p : parts) {
        merge(result, p);
    }
    return result;
}

}  // namespace nelsim

#endif
