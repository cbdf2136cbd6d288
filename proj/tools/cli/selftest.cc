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


#include "cli/selftest.h"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <functional>

#include "cli/cli.h"
#include "nelsim/certify/edqc.h"
#include "nelsim/games/chsh.h"
#include "nelsim/lhv/lhv.h"
#include "nelsim/postsim/circuit.h"
#include "nelsim/postsim/sim.h"
#include "nelsim/qcore/haar.h"
#include "nelsim/qcore/linalg.h"
#include "nelsim/qcore/named_states.h"
#include "nelsim/qcore/ops.h"
#include "nelsim/qcore/povm.h"
#include "nelsim/rsp/rsp.h"
#include "nelsim/witness/witness.h"

using nlohmann::json;

namespace nelsim::cli {

namespace {

constexpr size_t MAX_REPORTED_FAILURES = 8;
constexpr double TOLERANCE = 1e-10;

Matrix random_psd(size_t dim, size_t rank, Rng &rng) {
    Matrix m = Matrix::Zero((Eigen::Index)dim, (Eigen::Index)dim);
    for (size_t k = 0; k < rank; k++) {
        m += rng.uniform() * outer(haar_state(dim, rng).amplitudes());
    }
    return m;
}

/// A_i = S^(-1/2) G_i S^(-1/2) for random positive G_i of mixed rank; G_0 has full rank so S is invertible.
Povm random_povm(size_t dim, size_t outcomes, Rng &rng) {
    std::vector<Matrix> g;
    Matrix total = Matrix::Zero((Eigen::Index)dim, (Eigen::Index)dim);
    for (size_t i = 0; i < outcomes; i++) {
        size_t rank = i == 0 ? dim : 1 + (size_t)rng.below(dim);
        g.push_back(random_psd(dim, rank, rng));
        total += g.back();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(total);
    Matrix inv_sqrt = es.operatorInverseSqrt();
    for (auto &e : g) {
        Matrix m = inv_sqrt * e * inv_sqrt;
        e = (m + m.adjoint()) / 2;
    }
    return Povm::from_elements(std::move(g));
}

DensityMatrix random_density(size_t dim, Rng &rng) {
    Matrix m = random_psd(dim, dim, rng);
    return DensityMatrix::from_matrix(Matrix(m / m.trace().real()));
}

/// Checks that a refinement sums back to each coarse element and pushes its Born law forward to the coarse law.
void check_pushforward(SuiteResult &r, const Povm &povm, const FineGrainedPovm &fine, Rng &rng, const std::string &tag) {
    std::vector<Matrix> rebuilt(povm.size(), Matrix::Zero((Eigen::Index)povm.dim(), (Eigen::Index)povm.dim()));
    for (const auto &e : fine.elements) {
        rebuilt[e.coarse] += e.element();
    }
    for (size_t a = 0; a < povm.size(); a++) {
        r.check(max_abs_diff(rebuilt[a], povm[a]) < TOLERANCE, tag + ": element " + std::to_string(a) + " rebuilt");
    }
    r.check(max_abs_diff(fine.resolution(), Matrix::Identity((Eigen::Index)povm.dim(), (Eigen::Index)povm.dim())) <
                TOLERANCE,
            tag + ": refinement resolves the identity");
    for (int trial = 0; trial < 4; trial++) {
        DensityMatrix rho = random_density(povm.dim(), rng);
        std::vector<double> coarse = outcome_probabilities(rho, povm);
        std::vector<double> pushed(povm.size(), 0.0);
        for (const auto &e : fine.elements) {
            pushed[e.coarse] += e.weight * e.ket.dot(rho.matrix() * e.ket).real();
        }
        for (size_t a = 0; a < povm.size(); a++) {
            r.check(std::abs(pushed[a] - coarse[a]) < TOLERANCE, tag + ": pushforward of outcome " + std::to_string(a));
        }
    }
}

/// Every gate sequence of length <= depth over H on each qubit and CCX on each (control pair, target).
std::vector<Circuit> enumerate_circuits(unsigned qubits, unsigned depth) {
    std::vector<Gate> alphabet;
    for (unsigned q = 0; q < qubits; q++) {
        alphabet.push_back(Gate{GateKind::H, {q, 0, 0}, 0});
    }
    for (unsigned t = 0; t < qubits; t++) {
        for (unsigned c1 = 0; c1 < qubits; c1++) {
            for (unsigned c2 = c1 + 1; c2 < qubits; c2++) {
                if (c1 != t && c2 != t) {
                    alphabet.push_back(Gate{GateKind::CCX, {c1, c2, t}, 0});
                }
            }
        }
    }
    std::vector<Circuit> out{Circuit(qubits)};
    std::vector<Circuit> frontier = out;
    for (unsigned d = 0; d < depth; d++) {
        std::vector<Circuit> next;
        for (const auto &c : frontier) {
            for (const auto &g : alphabet) {
                Circuit e = c;
                e.append(g);
                next.push_back(e);
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return out;
}

template <typename F>
SuiteResult timed(const std::string &name, F body) {
    auto start = std::chrono::steady_clock::now();
    SuiteResult r;
    r.name = name;
    body(r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<std::string> split_args(const std::string &line) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos < line.size()) {
        size_t end = line.find(' ', pos);
        if (end == std::string::npos) {
            end = line.size();
        }
        if (end > pos) {
            out.push_back(line.substr(pos, end - pos));
        }
        pos = end + 1;
    }
    return out;
}

}  // namespace

void SuiteResult::check(bool ok, const std::string &what) {
    checks++;
    if (!ok) {
        passed = false;
        if (failures.size() < MAX_REPORTED_FAILURES) {
            failures.push_back(what);
        }
    }
}

SuiteResult fine_graining_suite() {
    return timed("fine-graining pushforward", [](SuiteResult &r) {
        Rng rng(0xf17e);
        for (size_t dim : {2, 4}) {
            for (size_t outcomes = 2; outcomes <= 5; outcomes++) {
                for (int trial = 0; trial < 10; trial++) {
                    Povm povm = random_povm(dim, outcomes, rng);
                    check_pushforward(r, povm, fine_grain(povm), rng,
                                      "random POVM dim " + std::to_string(dim) + " outcomes " +
                                          std::to_string(outcomes));
                }
            }
        }
        for (size_t outcomes = 2; outcomes <= 6; outcomes++) {
            Povm povm = random_rank_one_qubit_povm(outcomes, rng);
            check_pushforward(r, povm, fine_grain(povm), rng, "rank-one POVM");
        }
        for (unsigned qubits = 1; qubits <= 4; qubits++) {
            for (int trial = 0; trial < 10; trial++) {
                Circuit c = random_circuit(qubits, 3 * qubits, rng, trial % 2 == 1);
                check_pushforward(r, circuit_outcome_povm(c), circuit_povm(c), rng,
                                  "circuit " + c.to_json().dump());
            }
        }
    });
}

SuiteResult resolution_suite() {
    return timed("circuit resolution of identity", [](SuiteResult &r) {
        auto check_circuit = [&r](const Circuit &c) {
            Matrix sum = Matrix::Zero(2, 2);
            for (const auto &pair : circuit_eigenpairs(c)) {
                if (!pair.is_zero()) {
                    sum += pair.eta * outer(pair.psi->amplitudes());
                }
            }
            r.check(max_abs_diff(sum, Matrix::Identity(2, 2)) < TOLERANCE, "sum eta P = I for " + c.to_json().dump());
        };
        for (unsigned qubits = 1; qubits <= 4; qubits++) {
            for (const auto &c : enumerate_circuits(qubits, qubits <= 3 ? 3 : 2)) {
                check_circuit(c);
            }
        }
        Rng rng(0x2e5);
        for (unsigned qubits = 1; qubits <= 4; qubits++) {
            for (int trial = 0; trial < 100; trial++) {
                check_circuit(random_circuit(qubits, 1 + (unsigned)rng.below(16), rng, trial % 2 == 1));
            }
        }
    });
}

SuiteResult partial_transpose_suite() {
    return timed("partial-transpose involution", [](SuiteResult &r) {
        Rng rng(0x97);
        for (int trial = 0; trial < 200; trial++) {
            Matrix m(4, 4);
            for (Eigen::Index i = 0; i < 4; i++) {
                for (Eigen::Index j = 0; j < 4; j++) {
                    m(i, j) = Complex(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
                }
            }
            for (Subsystem s : {Subsystem::A, Subsystem::B}) {
                Matrix once = partial_transpose(m, s);
                r.check(partial_transpose(once, s) == m, "involution is exact");
                r.check(std::abs(once.trace() - m.trace()) < 1e-14, "trace preserved");
            }
            r.check(max_abs_diff(partial_transpose(m, Subsystem::A),
                                 Matrix(partial_transpose(m, Subsystem::B).transpose())) == 0,
                    "transposing one factor equals transposing the other and then the whole");
        }
        for (double p : {0.2, 1.0 / 3.0 + 1e-6, 0.5, 0.9}) {
            bool npt = min_eigenvalue(partial_transpose(werner(p).matrix(), Subsystem::B)) < -1e-9;
            r.check(npt == (p > 1.0 / 3.0), "werner partial transpose sign at p = " + std::to_string(p));
        }
    });
}

SuiteResult replay_suite(unsigned workers) {
    return timed("seed replay", [workers](SuiteResult &r) {
        std::string w = std::to_string(workers + 1);
        const std::vector<std::string> commands = {
            "chsh --rounds 20000 --seed 1",
            "sqg --state werner:0.9 --rounds 20000 --seed 7",
            "sqg --state werner:0.9 --source marginals --rounds 20000 --seed 7",
            "rsp --n 8 --rounds 300 --seed 1",
            "certify --state werner:0.95 --tcf-n 8 --repetitions 800 --seed 5 --keep-tuples",
            "edqc --state werner:0.9 --mode honest --rounds 20000 --seed 2",
            "edqc --state werner:0.9 --mode separable --rounds 20000 --seed 2",
        };
        for (const auto &line : commands) {
            CommandOutput a = execute(split_args(line));
            CommandOutput b = execute(split_args(line));
            r.check(a.exit_code == Ok, "'" + line + "' exits 0");
            r.check(!a.report.empty() && a.report == b.report, "'" + line + "' replays byte-identically");
            if (line.rfind("certify", 0) != 0) {
                CommandOutput c = execute(split_args(line + " --workers " + w));
                r.check(a.report == c.report, "'" + line + "' does not depend on the worker count");
            }
        }

        Rng rng(0x4e9);
        Povm pa = random_povm(2, 3, rng), pb = random_povm(2, 2, rng);
        HirschModel model = HirschModel::make(1.0 / 3.0, qubit_state("ket0"), qubit_state("ket0"));
        auto exact = joint_table(model.target_state(), pa, pb);
        auto t1 = hirsch_mc(model, fine_grain(pa), fine_grain(pb), 20000, 3, 1).to_csv(exact);
        auto t2 = hirsch_mc(model, fine_grain(pa), fine_grain(pb), 20000, 3, 1).to_csv(exact);
        auto t3 = hirsch_mc(model, fine_grain(pa), fine_grain(pb), 20000, 3, workers + 1).to_csv(exact);
        r.check(t1 == t2, "hirsch LHV table replays byte-identically");
        r.check(t1 == t3, "hirsch LHV table does not depend on the worker count");

        Circuit ca = random_circuit(3, 6, rng), cb = random_circuit(3, 6, rng);
        CoupledConfig cfg;
        cfg.samples = 300;
        cfg.seed = 4;
        cfg.encoding_ell = 2;
        cfg.encoding_backend = ScalarBackend::Extended;
        cfg.estimator.ell = 8;
        CircuitParty alice = CircuitParty::build(ca, qubit_state("ket0"));
        CircuitParty bob = CircuitParty::build(cb, qubit_state("ket0"));
        auto s1 = run_coupled_simulation(cfg, alice, bob);
        cfg.workers = workers + 1;
        auto s2 = run_coupled_simulation(cfg, alice, bob);
        r.check(s1.efficient.counts == s2.efficient.counts && s1.ideal.counts == s2.ideal.counts &&
                    s1.disagreements == s2.disagreements,
                "coupled postselection simulation does not depend on the worker count");
    });
}

std::vector<SuiteResult> run_selftest(unsigned workers) {
    return {fine_graining_suite(), resolution_suite(), partial_transpose_suite(), replay_suite(workers)};
}

json selftest_to_json(const std::vector<SuiteResult> &suites) {
    json out = json::array();
    for (const auto &s : suites) {
        out.push_back({{"name", s.name}, {"passed", s.passed}, {"checks", s.checks}, {"failures", s.failures}});
    }
    return out;
}

}  // namespace nelsim::cli
