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


#include "nelsim/postsim/circuit.h"

#include <cmath>

#include "nelsim/qcore/errors.h"

using namespace nelsim;

namespace {

constexpr unsigned MAX_QUBITS = 20;
constexpr double ZERO_BRANCH_NORM = 1e-300;

uint64_t bit_of(unsigned qubit, unsigned qubits) {
    return uint64_t{1} << (qubits - 1 - qubit);
}

GateKind parse_kind(const std::string &name) {
    if (name == "h") {
        return GateKind::H;
    }
    if (name == "x") {
        return GateKind::X;
    }
    if (name == "cx") {
        return GateKind::CX;
    }
    if (name == "ch") {
        return GateKind::CH;
    }
    if (name == "ccx") {
        return GateKind::CCX;
    }
    if (name == "post") {
        return GateKind::Post;
    }
    throw ValidationError("unknown gate '" + name + "'");
}

/// Projects onto `value` of the qubit and returns the kept squared norm.
double project(Vector &v, unsigned qubits, unsigned q, int value) {
    uint64_t m = bit_of(q, qubits);
    double kept = 0;
    for (Eigen::Index i = 0; i < v.size(); i++) {
        bool set = ((uint64_t)i & m) != 0;
        if (set != (value == 1)) {
            v(i) = 0;
        } else {
            kept += std::norm(v(i));
        }
    }
    return kept;
}

double snap(double x) {
    return std::abs(x) < AMPLITUDE_SNAP ? 0.0 : x;
}

}  // namespace

unsigned Gate::arity() const {
    switch (kind) {
        case GateKind::H:
        case GateKind::X:
        case GateKind::Post:
            return 1;
        case GateKind::CX:
        case GateKind::CH:
            return 2;
        case GateKind::CCX:
            return 3;
    }
    return 0;
}

const char *nelsim::gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::H:
            return "h";
        case GateKind::X:
            return "x";
        case GateKind::CX:
            return "cx";
        case GateKind::CH:
            return "ch";
        case GateKind::CCX:
            return "ccx";
        case GateKind::Post:
            return "post";
    }
    return "?";
}

nlohmann::json Gate::to_json() const {
    nlohmann::json j = nlohmann::json::array({gate_name(kind)});
    for (unsigned k = 0; k < arity(); k++) {
        j.push_back(qubits[k]);
    }
    if (kind == GateKind::Post) {
        j.push_back(value);
    }
    return j;
}

Circuit::Circuit(unsigned qubits) : qubits_(qubits) {
    if (qubits == 0 || qubits > MAX_QUBITS) {
        throw ValidationError("circuit qubit count must be in [1, " + std::to_string(MAX_QUBITS) + "]");
    }
}

void Circuit::check_qubit(unsigned q) const {
    if (q >= qubits_) {
        throw ValidationError("gate qubit index " + std::to_string(q) + " out of range");
    }
}

Circuit &Circuit::append(const Gate &g) {
    for (unsigned k = 0; k < g.arity(); k++) {
        check_qubit(g.qubits[k]);
        for (unsigned l = 0; l < k; l++) {
            if (g.qubits[l] == g.qubits[k]) {
                throw ValidationError("gate acts twice on the same qubit");
            }
        }
    }
    if (g.kind == GateKind::Post && g.value != 0 && g.value != 1) {
        throw ValidationError("postselection value must be 0 or 1");
    }
    gates_.push_back(g);
    return *this;
}

Circuit &Circuit::h(unsigned q) {
    return append(Gate{GateKind::H, {q, 0, 0}, 0});
}

Circuit &Circuit::x(unsigned q) {
    return append(Gate{GateKind::X, {q, 0, 0}, 0});
}

Circuit &Circuit::cx(unsigned control, unsigned target) {
    return append(Gate{GateKind::CX, {control, target, 0}, 0});
}

Circuit &Circuit::ch(unsigned control, unsigned target) {
    return append(Gate{GateKind::CH, {control, target, 0}, 0});
}

Circuit &Circuit::ccx(unsigned c1, unsigned c2, unsigned target) {
    return append(Gate{GateKind::CCX, {c1, c2, target}, 0});
}

Circuit &Circuit::post(unsigned q, int value) {
    return append(Gate{GateKind::Post, {q, 0, 0}, value});
}

Circuit &Circuit::set_outputs(std::vector<unsigned> outputs) {
    for (unsigned q : outputs) {
        check_qubit(q);
    }
    outputs_ = std::move(outputs);
    return *this;
}

std::vector<unsigned> Circuit::outputs() const {
    if (outputs_) {
        return *outputs_;
    }
    std::vector<unsigned> all(qubits_);
    for (unsigned q = 0; q < qubits_; q++) {
        all[q] = q;
    }
    return all;
}

bool Circuit::has_postselection() const {
    for (const Gate &g : gates_) {
        if (g.kind == GateKind::Post) {
            return true;
        }
    }
    return false;
}

bool Circuit::uses_core_gate_set() const {
    for (const Gate &g : gates_) {
        if (g.kind != GateKind::H && g.kind != GateKind::CCX) {
            return false;
        }
    }
    return true;
}

Circuit Circuit::inverse() const {
    if (has_postselection()) {
        throw ValidationError("a circuit with postselection has no inverse");
    }
    Circuit inv(qubits_);
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
        inv.append(*it);
    }
    inv.outputs_ = outputs_;
    return inv;
}

Circuit Circuit::with_question(uint64_t question, const std::vector<unsigned> &question_qubits) const {
    Circuit c(qubits_);
    for (size_t j = 0; j < question_qubits.size(); j++) {
        if ((question >> j) & 1) {
            c.x(question_qubits[j]);
        }
    }
    if (question >> question_qubits.size()) {
        throw ValidationError("question has more bits than question qubits");
    }
    for (const Gate &g : gates_) {
        c.append(g);
    }
    c.outputs_ = outputs_;
    return c;
}

uint64_t Circuit::answer(uint64_t outcome) const {
    uint64_t ans = 0;
    for (unsigned q : outputs()) {
        ans = (ans << 1) | ((outcome & bit_of(q, qubits_)) ? 1 : 0);
    }
    return ans;
}

Circuit Circuit::from_json(const nlohmann::json &j) {
    if (!j.is_object() || !j.contains("qubits") || !j.contains("gates")) {
        throw ValidationError("circuit JSON needs 'qubits' and 'gates'");
    }
    if (!j["qubits"].is_number_integer() || j["qubits"].get<int64_t>() <= 0) {
        throw ValidationError("circuit 'qubits' must be a positive integer");
    }
    Circuit c((unsigned)j["qubits"].get<int64_t>());
    if (!j["gates"].is_array()) {
        throw ValidationError("circuit 'gates' must be an array");
    }
    for (const auto &gj : j["gates"]) {
        if (!gj.is_array() || gj.empty() || !gj[0].is_string()) {
            throw ValidationError("each gate must be an array starting with its name");
        }
        Gate g;
        g.kind = parse_kind(gj[0].get<std::string>());
        size_t expected = 1 + g.arity() + (g.kind == GateKind::Post ? 1 : 0);
        if (gj.size() != expected) {
            throw ValidationError(std::string("gate '") + gate_name(g.kind) + "' has the wrong number of arguments");
        }
        for (size_t k = 1; k < expected; k++) {
            if (!gj[k].is_number_integer() || gj[k].get<int64_t>() < 0) {
                throw ValidationError("gate arguments must be non-negative integers");
            }
        }
        for (unsigned k = 0; k < g.arity(); k++) {
            g.qubits[k] = (unsigned)gj[1 + k].get<int64_t>();
        }
        if (g.kind == GateKind::Post) {
            g.value = (int)gj[2].get<int64_t>();
        }
        c.append(g);
    }
    if (j.contains("outputs")) {
        std::vector<unsigned> outs;
        for (const auto &o : j["outputs"]) {
            if (!o.is_number_integer() || o.get<int64_t>() < 0) {
                throw ValidationError("outputs must be qubit indices");
            }
            outs.push_back((unsigned)o.get<int64_t>());
        }
        c.set_outputs(std::move(outs));
    }
    return c;
}

nlohmann::json Circuit::to_json() const {
    nlohmann::json j;
    j["qubits"] = qubits_;
    j["gates"] = nlohmann::json::array();
    for (const Gate &g : gates_) {
        j["gates"].push_back(g.to_json());
    }
    if (outputs_) {
        j["outputs"] = *outputs_;
    }
    return j;
}

void nelsim::apply_gate(const Gate &g, unsigned qubits, Vector &v) {
    const Eigen::Index n = v.size();
    switch (g.kind) {
        case GateKind::H: {
            uint64_t m = bit_of(g.qubits[0], qubits);
            for (Eigen::Index i = 0; i < n; i++) {
                if ((uint64_t)i & m) {
                    continue;
                }
                Eigen::Index j = (Eigen::Index)((uint64_t)i | m);
                Complex a = v(i), b = v(j);
                v(i) = (a + b) * M_SQRT1_2;
                v(j) = (a - b) * M_SQRT1_2;
            }
            break;
        }
        case GateKind::X: {
            uint64_t m = bit_of(g.qubits[0], qubits);
            for (Eigen::Index i = 0; i < n; i++) {
                if (!((uint64_t)i & m)) {
                    std::swap(v(i), v((Eigen::Index)((uint64_t)i | m)));
                }
            }
            break;
        }
        case GateKind::CX:
        case GateKind::CH:
        case GateKind::CCX: {
            uint64_t controls = bit_of(g.qubits[0], qubits);
            unsigned target_slot = 1;
            if (g.kind == GateKind::CCX) {
                controls |= bit_of(g.qubits[1], qubits);
                target_slot = 2;
            }
            uint64_t t = bit_of(g.qubits[target_slot], qubits);
            for (Eigen::Index i = 0; i < n; i++) {
                uint64_t u = (uint64_t)i;
                if ((u & controls) != controls || (u & t)) {
                    continue;
                }
                Eigen::Index j = (Eigen::Index)(u | t);
                if (g.kind == GateKind::CH) {
                    Complex a = v(i), b = v(j);
                    v(i) = (a + b) * M_SQRT1_2;
                    v(j) = (a - b) * M_SQRT1_2;
                } else {
                    std::swap(v(i), v(j));
                }
            }
            break;
        }
        case GateKind::Post:
            throw ValidationError("postselection is not a unitary gate");
    }
}

PostState nelsim::run_postselected(const Circuit &c, const Vector &input) {
    if ((size_t)input.size() != c.dim()) {
        throw ValidationError("input dimension does not match the circuit");
    }
    PostState st{input, 1.0};
    double norm2 = input.squaredNorm();
    for (const Gate &g : c.gates()) {
        if (g.kind != GateKind::Post) {
            apply_gate(g, c.qubits(), st.amplitudes);
            continue;
        }
        double kept = project(st.amplitudes, c.qubits(), g.qubits[0], g.value);
        if (kept < ZERO_BRANCH_NORM) {
            throw ZeroBranchError("postselection on qubit " + std::to_string(g.qubits[0]) + " = " +
                                  std::to_string(g.value) + " has zero amplitude");
        }
        st.success_probability *= kept / norm2;
        st.amplitudes /= std::sqrt(kept);
        norm2 = 1;
    }
    return st;
}

PostState nelsim::run_postselected(const Circuit &c, const PureState &input) {
    return run_postselected(c, input.amplitudes());
}

SampledRun nelsim::run_postselected_sampled(const Circuit &c, const Vector &input, Rng &rng,
                                            uint64_t max_attempts) {
    if ((size_t)input.size() != c.dim()) {
        throw ValidationError("input dimension does not match the circuit");
    }
    SampledRun run;
    while (run.attempts < max_attempts) {
        run.attempts++;
        PostState st{input / input.norm(), 1.0};
        bool ok = true;
        for (const Gate &g : c.gates()) {
            if (g.kind != GateKind::Post) {
                apply_gate(g, c.qubits(), st.amplitudes);
                continue;
            }
            Vector trial = st.amplitudes;
            double kept = project(trial, c.qubits(), g.qubits[0], g.value);
            if (!rng.bernoulli(kept)) {
                ok = false;
                break;
            }
            st.success_probability *= kept;
            st.amplitudes = trial / std::sqrt(kept);
        }
        if (ok) {
            run.state = std::move(st);
            return run;
        }
    }
    throw ZeroBranchError("postselection did not succeed within the attempt budget");
}

Vector nelsim::first_qubit_amplitudes(const Vector &v, unsigned qubits, uint64_t rest) {
    uint64_t high = uint64_t{1} << (qubits - 1);
    if (rest >= high) {
        throw ValidationError("rest pattern exceeds the other qubits");
    }
    Vector out(2);
    out(0) = v((Eigen::Index)rest);
    out(1) = v((Eigen::Index)(high | rest));
    return out;
}

EigenPair nelsim::eigenvector_from_circuit(const Circuit &c, uint64_t outcome) {
    if (c.has_postselection()) {
        throw ValidationError("eigenvectors are defined for circuits without postselection");
    }
    if (outcome >= c.dim()) {
        throw ValidationError("outcome out of range");
    }
    Vector v = Vector::Zero((Eigen::Index)c.dim());
    v((Eigen::Index)outcome) = 1;
    Circuit inv = c.inverse();
    for (const Gate &g : inv.gates()) {
        apply_gate(g, c.qubits(), v);
    }
    Vector phi = first_qubit_amplitudes(v, c.qubits());
    for (int k = 0; k < 2; k++) {
        phi(k) = Complex(snap(phi(k).real()), snap(phi(k).imag()));
    }
    EigenPair pair;
    pair.eta = phi.squaredNorm();
    if (pair.eta > 0) {
        pair.psi = PureState::from_amplitudes(phi / std::sqrt(pair.eta));
    } else {
        pair.eta = 0;
    }
    return pair;
}

std::vector<EigenPair> nelsim::circuit_eigenpairs(const Circuit &c) {
    std::vector<EigenPair> pairs;
    pairs.reserve(c.dim());
    for (uint64_t a = 0; a < c.dim(); a++) {
        pairs.push_back(eigenvector_from_circuit(c, a));
    }
    return pairs;
}

FineGrainedPovm nelsim::circuit_povm(const Circuit &c) {
    FineGrainedPovm f;
    f.dim = 2;
    f.num_coarse = c.dim();
    auto pairs = circuit_eigenpairs(c);
    for (uint64_t a = 0; a < pairs.size(); a++) {
        if (pairs[a].is_zero()) {
            continue;
        }
        f.elements.push_back(FineElement{pairs[a].eta, pairs[a].psi->amplitudes(), a});
    }
    return f;
}

Povm nelsim::circuit_outcome_povm(const Circuit &c) {
    std::vector<Matrix> es;
    for (const EigenPair &p : circuit_eigenpairs(c)) {
        es.push_back(p.is_zero() ? Matrix(Matrix::Zero(2, 2)) : Matrix(p.eta * p.psi->projector()));
    }
    return Povm::from_elements(std::move(es));
}

std::vector<double> nelsim::outcome_law(const Circuit &c, const DensityMatrix &first_qubit) {
    if (first_qubit.dim() != 2) {
        throw ValidationError("outcome_law takes a single-qubit input");
    }
    if (c.has_postselection()) {
        throw ValidationError("outcome_law needs a circuit without postselection");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(first_qubit.matrix());
    std::vector<double> law(c.dim(), 0.0);
    uint64_t high = uint64_t{1} << (c.qubits() - 1);
    for (int k = 0; k < 2; k++) {
        double w = solver.eigenvalues()(k);
        if (w <= 0) {
            continue;
        }
        Vector v = Vector::Zero((Eigen::Index)c.dim());
        v(0) = solver.eigenvectors()(0, k);
        v((Eigen::Index)high) = solver.eigenvectors()(1, k);
        for (const Gate &g : c.gates()) {
            apply_gate(g, c.qubits(), v);
        }
        for (uint64_t a = 0; a < c.dim(); a++) {
            law[a] += w * std::norm(v((Eigen::Index)a));
        }
    }
    return law;
}

Circuit nelsim::random_circuit(unsigned qubits, unsigned gates, Rng &rng, bool convenience) {
    Circuit c(qubits);
    auto pick_distinct = [&](unsigned count) {
        std::array<unsigned, 3> q{};
        for (unsigned k = 0; k < count; k++) {
            bool fresh = false;
            while (!fresh) {
                q[k] = (unsigned)rng.below(qubits);
                fresh = true;
                for (unsigned l = 0; l < k; l++) {
                    fresh = fresh && q[l] != q[k];
                }
            }
        }
        return q;
    };
    for (unsigned i = 0; i < gates; i++) {
        unsigned kinds = convenience ? 4 : 2;
        unsigned kind = (unsigned)rng.below(kinds);
        if (kind == 1 && qubits < 3) {
            kind = 0;
        }
        if (kind == 3 && qubits < 2) {
            kind = 2;
        }
        switch (kind) {
            case 0:
                c.h(pick_distinct(1)[0]);
                break;
            case 1: {
                auto q = pick_distinct(3);
                c.ccx(q[0], q[1], q[2]);
                break;
            }
            case 2:
                c.x(pick_distinct(1)[0]);
                break;
            default: {
                auto q = pick_distinct(2);
                c.cx(q[0], q[1]);
                break;
            }
        }
    }
    return c;
}
