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

#include "nelsim/rsp/rsp.h"

#include <cmath>
#include <numbers>

#include "nelsim/qcore/errors.h"
#include "nelsim/qcore/parallel.h"
#include "nelsim/qcore/povm.h"

namespace nelsim {

namespace {

constexpr uint64_t RSP_DOMAIN = 0x5253'5001;
constexpr uint64_t RSP_CHUNK = 4096;
constexpr unsigned CLAW_SEARCH_MAX_BITS = 16;
constexpr unsigned STATEVECTOR_MAX_BITS = 8;

// Six-state index of |+_theta> for theta code 0..3.
constexpr std::array<size_t, 4> PLUS_THETA_INDEX = {2, 4, 3, 5};

std::vector<Preimage> search_preimages(const TcfPublicKey &pk, uint64_t y) {
    std::vector<Preimage> out;
    uint64_t count = uint64_t{1} << pk.n();
    for (int b = 0; b < 2; b++) {
        for (uint64_t x = 0; x < count; x++) {
            if (pk.eval(b, x) == y) {
                out.push_back({b, x});
            }
        }
    }
    return out;
}

}  // namespace

const char *round_tag_name(RoundTag tag) {
    switch (tag) {
        case RoundTag::R1:
            return "R1";
        case RoundTag::R2a:
            return "R2a";
        case RoundTag::R2b:
            return "R2b";
        case RoundTag::R3a:
            return "R3a";
        case RoundTag::R3b:
            return "R3b";
    }
    return "?";
}

const char *observable_name(Observable c) {
    switch (c) {
        case Observable::X:
            return "X";
        case Observable::XMinusY:
            return "(X-Y)/sqrt2";
        case Observable::Y:
            return "Y";
        case Observable::XPlusY:
            return "(X+Y)/sqrt2";
        case Observable::Z:
            return "Z";
    }
    return "?";
}

const Matrix &observable_matrix(Observable c) {
    static const std::array<Matrix, NUM_OBSERVABLES> table = [] {
        const double h = std::numbers::sqrt2 / 2;
        std::array<Matrix, NUM_OBSERVABLES> t;
        t[0] = pauli(1);
        t[1] = h * (pauli(1) - pauli(2));
        t[2] = pauli(2);
        t[3] = h * (pauli(1) + pauli(2));
        t[4] = pauli(3);
        return t;
    }();
    return table[(size_t)c];
}

PureState ProverQubit::state() const {
    Vector v(2);
    if (kind == Kind::Basis) {
        return PureState::basis(2, code);
    }
    const double h = std::numbers::sqrt2 / 2;
    v << h, h * std::polar(1.0, code * std::numbers::pi / 2);
    return PureState::from_amplitudes(std::move(v));
}

size_t ProverQubit::six_state_index() const {
    return kind == Kind::Basis ? code : PLUS_THETA_INDEX[code];
}

double prob_outcome_zero(const PureState &qubit, Observable c) {
    const Vector &a = qubit.amplitudes();
    double expectation = (a.adjoint() * observable_matrix(c) * a)(0, 0).real() / a.squaredNorm();
    return std::min(1.0, std::max(0.0, (1 + expectation) / 2));
}

int measure_qubit(const PureState &qubit, Observable c, Rng &rng) {
    return rng.uniform() < prob_outcome_zero(qubit, c) ? 0 : 1;
}

const char *abort_reason_name(AbortReason r) {
    switch (r) {
        case AbortReason::None:
            return "None";
        case AbortReason::Malformed:
            return "Malformed";
        case AbortReason::WrongPreimage:
            return "WrongPreimage";
        case AbortReason::NoPreimage:
            return "NoPreimage";
        case AbortReason::BasisMismatch:
            return "BasisMismatch";
        case AbortReason::ObservableMismatch:
            return "ObservableMismatch";
    }
    return "?";
}

bool QracRecord::success() const {
    unsigned u = 2 * hint.code() + 1;
    int expected;
    if (c == Observable::XMinusY) {
        expected = (u == 1 || u == 7) ? 0 : 1;
    } else if (c == Observable::XPlusY) {
        expected = (u == 1 || u == 3) ? 0 : 1;
    } else {
        throw ValidationError("QRAC records need a diagonal observable");
    }
    return v == expected;
}

void QracStatistic::add(const QracRecord &r) {
    trials_++;
    successes_ += r.success() ? 1 : 0;
}

void QracStatistic::merge(const QracStatistic &other) {
    trials_ += other.trials_;
    successes_ += other.successes_;
}

double QracStatistic::rate() const {
    if (trials_ == 0) {
        throw UndeterminedError("no QRAC tests were recorded");
    }
    return (double)successes_ / (double)trials_;
}

HonestProver::HonestProver(ProverPhysics physics) : physics_(physics) {
}

uint64_t HonestProver::commit(const TcfPublicKey &pk, Rng &rng) {
    n_ = pk.n();
    qubit_.reset();
    int b = (int)rng.below(2);
    uint64_t x = rng.below(uint64_t{1} << n_);
    uint64_t y = pk.eval(b, x);
    switch (physics_) {
        case ProverPhysics::Oracle:
            if (!oracle_) {
                throw ValidationError("oracle physics needs a bound preimage oracle");
            }
            preimages_ = oracle_(y);
            break;
        case ProverPhysics::ClawSearch:
            if (n_ > CLAW_SEARCH_MAX_BITS) {
                throw ValidationError("claw search physics supports n <= 16");
            }
            preimages_ = search_preimages(pk, y);
            break;
        case ProverPhysics::Statevector:
            if (n_ > STATEVECTOR_MAX_BITS) {
                throw ValidationError("statevector physics supports n <= 8");
            }
            preimages_ = search_preimages(pk, y);
            break;
    }
    if (preimages_.empty() || preimages_.size() > 2) {
        throw Error("preimage structure is not one- or two-to-one");
    }
    return y;
}

Preimage HonestProver::reveal_preimage(Rng &rng) {
    if (preimages_.size() == 1) {
        return preimages_[0];
    }
    return preimages_[rng.below(2)];
}

Z4Vector HonestProver::equation(Rng &rng) {
    if (preimages_.size() == 1) {
        qubit_ = ProverQubit{ProverQubit::Kind::Basis, (unsigned)preimages_[0].b};
        return random_z4_vector(n_ / 2, rng);
    }
    uint64_t x0 = preimages_[0].x;
    uint64_t x1 = preimages_[1].x;
    if (physics_ != ProverPhysics::Statevector) {
        // Both branches have Fourier amplitudes of equal magnitude, so d is uniform.
        Z4Vector d = random_z4_vector(n_ / 2, rng);
        qubit_ = ProverQubit{ProverQubit::Kind::PlusTheta, z4_theta_code(d, x0, x1, n_)};
        return d;
    }
    auto outcomes = fourier_outcomes(x0, x1, n_);
    std::vector<double> probs;
    for (const auto &o : outcomes) {
        probs.push_back(o.probability);
    }
    size_t pick = sample_index(probs, rng.uniform());
    const Vector &q = outcomes[pick].qubit;
    double phase = std::arg(q(1) / q(0));
    unsigned code = (unsigned)(((long)std::lround(phase / (std::numbers::pi / 2)) % 4 + 4) % 4);
    qubit_ = ProverQubit{ProverQubit::Kind::PlusTheta, code};
    return outcomes[pick].d;
}

int HonestProver::measure(Observable c, Rng &rng) {
    if (!qubit_) {
        throw Error("measurement requested before the equation round");
    }
    return measure_qubit(qubit_->state(), c, rng);
}

std::vector<FourierOutcome> fourier_outcomes(uint64_t x0, uint64_t x1, unsigned n) {
    if (n % 2 != 0 || n > STATEVECTOR_MAX_BITS) {
        throw ValidationError("statevector Fourier transform supports even n <= 8");
    }
    size_t half = size_t{1} << n;
    Vector psi = Vector::Zero((Eigen::Index)(2 * half));
    const double h = std::numbers::sqrt2 / 2;
    psi((Eigen::Index)x0) = h;
    psi((Eigen::Index)(half + x1)) = h;
    const Complex omega[4] = {1, Complex(0, 1), -1, Complex(0, -1)};
    for (unsigned j = 0; j < n / 2; j++) {
        Vector next = Vector::Zero(psi.size());
        for (size_t idx = 0; idx < 2 * half; idx++) {
            if (psi((Eigen::Index)idx) == Complex(0)) {
                continue;
            }
            unsigned digit = (unsigned)((idx >> (2 * j)) & 3);
            size_t base = idx & ~(size_t{3} << (2 * j));
            for (unsigned d = 0; d < 4; d++) {
                next((Eigen::Index)(base | ((size_t)d << (2 * j)))) +=
                    0.5 * omega[(d * digit) % 4] * psi((Eigen::Index)idx);
            }
        }
        psi = std::move(next);
    }
    std::vector<FourierOutcome> out;
    for (size_t d = 0; d < half; d++) {
        Vector q(2);
        q << psi((Eigen::Index)d), psi((Eigen::Index)(half + d));
        double p = q.squaredNorm();
        if (p < 1e-15) {
            continue;
        }
        out.push_back({j_encode(d, n), p, q / std::sqrt(p)});
    }
    return out;
}

bool RspTranscript::reached(RoundTag tag) const {
    for (RoundTag t : path) {
        if (t == tag) {
            return true;
        }
    }
    return false;
}

nlohmann::json RspTranscript::to_json() const {
    nlohmann::json j;
    j["G"] = mode_bit;
    j["pk"] = pk_hex;
    j["y"] = y;
    nlohmann::json p = nlohmann::json::array();
    for (RoundTag t : path) {
        p.push_back(round_tag_name(t));
    }
    j["path"] = p;
    if (preimage) {
        j["b"] = preimage->b;
        j["x"] = preimage->x;
    }
    if (d) {
        j["d"] = *d;
    }
    if (c) {
        j["c"] = observable_name(*c);
    }
    if (v) {
        j["v"] = *v;
    }
    j["verdict"] = aborted() ? "Abort" : "Pass";
    if (aborted()) {
        j["reason"] = abort_reason_name(abort);
    }
    if (label) {
        j["label"] = *label;
    }
    if (qrac) {
        j["qrac"] = {{"W_hat", qrac->hint.w_bit ? "Y" : "X"}, {"v_hat", qrac->hint.v_hat}, {"success", qrac->success()}};
    }
    return j;
}

RspVerifier RspVerifier::begin(const RspOptions &options, Rng &rng) {
    if (options.ell < 1) {
        throw ValidationError("security parameter must be positive");
    }
    int g = (int)rng.below(2);
    TcfMode mode = g == 0 ? TcfMode::TwoToOne : TcfMode::Injective;
    return RspVerifier(g, TcfKeyPair::generate(mode, options.n, rng, options.hide_mode));
}

void RspVerifier::receive_image(uint64_t y) {
    y_ = y;
}

AbortReason RspVerifier::check_preimage(const Preimage &p) const {
    if ((p.b != 0 && p.b != 1) || (p.x >> keys_.n()) != 0) {
        return AbortReason::Malformed;
    }
    return keys_.eval(p.b, p.x) == y_ ? AbortReason::None : AbortReason::WrongPreimage;
}

AbortReason RspVerifier::receive_equation(const Z4Vector &d) {
    try {
        validate_z4_vector(d, keys_.n());
    } catch (const ValidationError &) {
        return AbortReason::Malformed;
    }
    std::vector<Preimage> pre;
    try {
        pre = keys_.invert(y_);
    } catch (const NoPreimageError &) {
        return AbortReason::NoPreimage;
    }
    if (g_ == 1) {
        b_hat_ = pre[0].b;
    } else {
        hint_ = *w_v_from_d(d, pre[0].x, pre[1].x, keys_.n());
    }
    return AbortReason::None;
}

AbortReason RspVerifier::check_measurement(Observable c, int v, std::optional<QracRecord> &qrac) const {
    qrac.reset();
    if (v != 0 && v != 1) {
        return AbortReason::Malformed;
    }
    if (g_ == 1) {
        if (c == Observable::Z && v != b_hat_) {
            return AbortReason::BasisMismatch;
        }
        return AbortReason::None;
    }
    Observable expected = hint_.w_bit ? Observable::Y : Observable::X;
    if (c == expected && v != hint_.v_hat) {
        return AbortReason::ObservableMismatch;
    }
    if (c == Observable::XMinusY || c == Observable::XPlusY) {
        qrac = QracRecord{hint_, c, v};
    }
    return AbortReason::None;
}

size_t RspVerifier::prepared_label() const {
    if (g_ == 1) {
        return (size_t)b_hat_;
    }
    return PLUS_THETA_INDEX[hint_.code()];
}

RspTranscript run_rsp_instance(const RspOptions &options, RspProver &prover, Rng &rng) {
    RspTranscript tr;
    RspVerifier verifier = RspVerifier::begin(options, rng);
    prover.bind_physics(claw_oracle_for(verifier.keys()));
    tr.mode_bit = verifier.mode_bit();
    tr.pk_hex = to_hex(verifier.message().bytes());
    tr.path.push_back(RoundTag::R1);
    tr.y = prover.commit(verifier.message(), rng);
    verifier.receive_image(tr.y);

    if (rng.below(2) == 0) {
        tr.path.push_back(RoundTag::R2a);
        tr.preimage = prover.reveal_preimage(rng);
        tr.abort = verifier.check_preimage(*tr.preimage);
        return tr;
    }
    tr.path.push_back(RoundTag::R2b);
    tr.d = prover.equation(rng);
    tr.abort = verifier.receive_equation(*tr.d);
    if (tr.aborted()) {
        return tr;
    }
    if (rng.below(2) == 0) {
        tr.path.push_back(RoundTag::R3a);
        tr.c = (Observable)rng.below(NUM_OBSERVABLES);
        tr.v = prover.measure(*tr.c, rng);
        tr.abort = verifier.check_measurement(*tr.c, *tr.v, tr.qrac);
        return tr;
    }
    tr.path.push_back(RoundTag::R3b);
    tr.label = verifier.prepared_label();
    return tr;
}

void RspSummary::add(RspTranscript t, bool keep) {
    rounds++;
    aborts += t.aborted() ? 1 : 0;
    mode_counts[(size_t)t.mode_bit]++;
    for (RoundTag tag : t.path) {
        tag_counts[(size_t)tag]++;
    }
    if (t.label) {
        labels[(size_t)t.mode_bit][*t.label]++;
    }
    if (t.qrac) {
        qrac.add(*t.qrac);
    }
    if (keep) {
        transcripts.push_back(std::move(t));
    }
}

void RspSummary::merge(RspSummary &&other) {
    rounds += other.rounds;
    aborts += other.aborts;
    for (size_t k = 0; k < 2; k++) {
        mode_counts[k] += other.mode_counts[k];
        for (size_t s = 0; s < 6; s++) {
            labels[k][s] += other.labels[k][s];
        }
    }
    for (size_t k = 0; k < tag_counts.size(); k++) {
        tag_counts[k] += other.tag_counts[k];
    }
    qrac.merge(other.qrac);
    for (auto &t : other.transcripts) {
        transcripts.push_back(std::move(t));
    }
}

nlohmann::json RspSummary::to_json() const {
    nlohmann::json tags;
    for (size_t k = 0; k < tag_counts.size(); k++) {
        tags[round_tag_name((RoundTag)k)] = tag_counts[k];
    }
    nlohmann::json j{
        {"rounds", rounds},
        {"aborts", aborts},
        {"mode_counts", mode_counts},
        {"round_counts", tags},
        {"labels_by_mode", labels},
        {"qrac_trials", qrac.trials()},
        {"qrac_successes", qrac.successes()},
    };
    j["qrac_rate"] = qrac.trials() ? nlohmann::json(qrac.rate()) : nlohmann::json(nullptr);
    return j;
}

RspSummary run_rsp_session(
    const RspOptions &options, uint64_t rounds, uint64_t seed, unsigned workers, bool keep_transcripts) {
    return run_chunked<RspSummary>(
        rounds,
        RSP_CHUNK,
        seed,
        RSP_DOMAIN,
        workers,
        [&](Rng &rng, uint64_t count, RspSummary &acc) {
            HonestProver prover(options.physics);
            for (uint64_t i = 0; i < count; i++) {
                acc.add(run_rsp_instance(options, prover, rng), keep_transcripts);
            }
        },
        [](RspSummary &total, RspSummary &part) { total.merge(std::move(part)); });
}

ClawOracle claw_oracle_for(const TcfKeyPair &keys) {
    return [&keys](uint64_t y) { return keys.invert(y); };
}

}  // namespace nelsim
