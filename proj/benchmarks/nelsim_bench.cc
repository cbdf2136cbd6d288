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


#include <benchmark/benchmark.h>

#include "nelsim/certify/certification.h"
#include "nelsim/certify/edqc.h"
#include "nelsim/games/chsh.h"
#include "nelsim/games/sqg.h"
#include "nelsim/lhv/lhv.h"
#include "nelsim/postsim/dotprod.h"
#include "nelsim/postsim/sim.h"
#include "nelsim/qcore/haar.h"
#include "nelsim/qcore/named_states.h"
#include "nelsim/rsp/rsp.h"
#include "nelsim/tcf/tcf.h"
#include "nelsim/witness/witness.h"

using namespace nelsim;

namespace {

void BM_ChshRounds(benchmark::State &state) {
    uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(chsh_demo(seed++, 10000));
    }
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_ChshRounds);

void BM_SqgRounds(benchmark::State &state) {
    DensityMatrix rho = werner(0.9);
    Witness w = ppt_witness(rho);
    SqgRunOptions opt;
    opt.rounds = 100000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sqg_experiment(rho, w, SqgStrategy::honest(), SqgStrategy::honest(), opt));
        opt.seed++;
    }
    state.SetItemsProcessed(state.iterations() * (int64_t)opt.rounds);
}
BENCHMARK(BM_SqgRounds);

void BM_HirschSamples(benchmark::State &state) {
    Rng rng(1);
    HirschModel model = HirschModel::make(1.0 / 3.0, six_state(0), six_state(0));
    FineGrainedPovm a = fine_grain(random_rank_one_qubit_povm(3, rng));
    FineGrainedPovm b = fine_grain(random_rank_one_qubit_povm(4, rng));
    uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hirsch_mc(model, a, b, 10000, seed++, 1));
    }
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_HirschSamples);

void BM_DotProduct(benchmark::State &state) {
    DotProductOptions opt;
    opt.ell = (unsigned)state.range(0);
    opt.backend = state.range(1) ? ScalarBackend::Extended : ScalarBackend::Float;
    Rng rng(2);
    Vector psi(2);
    psi << Complex(0.6, 0), Complex(0.8, 0);
    DotTarget target = DotTarget::from_vector(haar_qubit(rng).amplitudes());
    for (auto _ : state) {
        benchmark::DoNotOptimize(dot_product_estimate(psi, target, opt, rng));
    }
}
BENCHMARK(BM_DotProduct)->Args({8, 0})->Args({16, 0})->Args({16, 1})->Args({40, 1})->Unit(benchmark::kMicrosecond);

void BM_CoupledSimulationSample(benchmark::State &state) {
    Rng rng(3);
    CircuitParty alice = CircuitParty::build(random_circuit(4, 12, rng), six_state(0));
    CircuitParty bob = CircuitParty::build(random_circuit(4, 12, rng), six_state(0));
    CoupledConfig cfg;
    cfg.samples = 200;
    cfg.encoding_ell = 4;
    cfg.encoding_backend = ScalarBackend::Extended;
    cfg.estimator.ell = 16;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_coupled_simulation(cfg, alice, bob));
        cfg.seed++;
    }
    state.SetItemsProcessed(state.iterations() * (int64_t)cfg.samples);
}
BENCHMARK(BM_CoupledSimulationSample)->Unit(benchmark::kMillisecond);

void BM_RspInstance(benchmark::State &state) {
    RspOptions opt;
    opt.n = (unsigned)state.range(0);
    opt.ell = opt.n;
    opt.physics = state.range(1) ? ProverPhysics::Oracle : ProverPhysics::ClawSearch;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_rsp_session(opt, 100, state.iterations(), 1, false));
    }
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_RspInstance)->Args({8, 0})->Args({12, 0})->Args({12, 1})->Unit(benchmark::kMillisecond);

void BM_CertificationRepetitions(benchmark::State &state) {
    DensityMatrix rho = werner(0.95);
    Witness w = ppt_witness(rho);
    CertifyOptions opt;
    opt.tcf_n = 12;
    opt.repetitions = 2000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_certification(rho, w, opt));
        opt.seed++;
    }
    state.SetItemsProcessed(state.iterations() * (int64_t)opt.repetitions);
}
BENCHMARK(BM_CertificationRepetitions)->Unit(benchmark::kMillisecond);

void BM_EdqcRounds(benchmark::State &state) {
    DensityMatrix rho = werner(0.9);
    Witness w = ppt_witness(rho);
    EdqcGameOptions opt;
    opt.rounds = 100000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_edqc_game(rho, w, opt));
        opt.seed++;
    }
    state.SetItemsProcessed(state.iterations() * (int64_t)opt.rounds);
}
BENCHMARK(BM_EdqcRounds);

void BM_TcfKeygen(benchmark::State &state) {
    Rng rng(4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(TcfKeyPair::generate(TcfMode::TwoToOne, 12, rng));
    }
}
BENCHMARK(BM_TcfKeygen);

}  // namespace

BENCHMARK_MAIN();
