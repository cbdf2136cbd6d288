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

#ifndef NELSIM_RSP_RSP_H
#define NELSIM_RSP_RSP_H

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "nelsim/qcore/state.h"
#include "nelsim/tcf/tcf.h"

namespace nelsim {

enum class RoundTag { R1, R2a, R2b, R3a, R3b };
const char *round_tag_name(RoundTag tag);

/// The five single-qubit observables the verifier may ask for, in the order X, (X-Y)/sqrt2, Y, (X+Y)/sqrt2, Z.
enum class Observable { X, XMinusY, Y, XPlusY, Z };
constexpr size_t NUM_OBSERVABLES = 5;
const char *observable_name(Observable c);
const Matrix &observable_matrix(Observable c);

/// A prepared qubit: |+_theta> with theta = code * pi/2, or the basis state |code>.
struct ProverQubit {
    enum class Kind { PlusTheta, Basis };
    Kind kind;
    unsigned code;

    PureState state() const;
    /// Index into the six-state list |0>, |1>, |+>, |->, |i>, |-i>.
    size_t six_state_index() const;
};

/// Born-rule measurement of `qubit` in the eigenbasis of c; outcome 0 is the +1 eigenvector.
int measure_qubit(const PureState &qubit, Observable c, Rng &rng);
double prob_outcome_zero(const PureState &qubit, Observable c);

enum class AbortReason { None, Malformed, WrongPreimage, NoPreimage, BasisMismatch, ObservableMismatch };
const char *abort_reason_name(AbortReason r);

struct QracRecord {
    ObservableHint hint;
    Observable c;
    int v;

    /// Success convention with u = 2t + 1: (X-Y)/sqrt2 scored against u0 (0 iff u in {1, 7}),
    /// (X+Y)/sqrt2 against u2 (0 iff u in {1, 3}).
    bool success() const;
};

class QracStatistic {
   public:
    void add(const QracRecord &r);
    void merge(const QracStatistic &other);
    uint64_t trials() const {
        return trials_;
    }
    uint64_t successes() const {
        return successes_;
    }
    /// Throws UndeterminedError when empty.
    double rate() const;

   private:
    uint64_t trials_ = 0;
    uint64_t successes_ = 0;
};

/// Preimage set of an image as seen by the physical state after the range measurement.
using ClawOracle = std::function<std::vector<Preimage>(uint64_t y)>;

/// The prover side of one protocol instance. Implementations only see the public evaluator.
class RspProver {
   public:
    virtual ~RspProver() = default;
    virtual uint64_t commit(const TcfPublicKey &pk, Rng &rng) = 0;
    virtual Preimage reveal_preimage(Rng &rng) = 0;
    virtual Z4Vector equation(Rng &rng) = 0;
    virtual int measure(Observable c, Rng &rng) = 0;
    /// Harness hook giving the simulated physics access to the preimage structure of the current key.
    virtual void bind_physics(ClawOracle oracle) {
        (void)oracle;
    }
    /// The qubit left with the prover after an equation round, when it is a definite labelled state.
    virtual std::optional<ProverQubit> qubit() const {
        return std::nullopt;
    }
};

enum class ProverPhysics {
    /// Recovers the preimage superposition by exhaustive search over the public evaluator (n <= 16).
    ClawSearch,
    /// Uses a harness-supplied preimage oracle.
    Oracle,
    /// Materializes the full statevector and its Z4 Fourier transform (n <= 8).
    Statevector,
};

class HonestProver : public RspProver {
   public:
    explicit HonestProver(ProverPhysics physics);

    uint64_t commit(const TcfPublicKey &pk, Rng &rng) override;
    Preimage reveal_preimage(Rng &rng) override;
    Z4Vector equation(Rng &rng) override;
    int measure(Observable c, Rng &rng) override;
    void bind_physics(ClawOracle oracle) override {
        oracle_ = std::move(oracle);
    }
    std::optional<ProverQubit> qubit() const override {
        return qubit_;
    }

    /// Preimages recorded at commit time (one or two, ordered by leading bit).
    const std::vector<Preimage> &preimages() const {
        return preimages_;
    }

   private:
    ProverPhysics physics_;
    ClawOracle oracle_;
    unsigned n_ = 0;
    std::vector<Preimage> preimages_;
    std::optional<ProverQubit> qubit_;
};

/// Residual qubit and probability for every Fourier outcome d of (|0>|x0> + |1>|x1>)/sqrt2, by explicit statevector.
struct FourierOutcome {
    Z4Vector d;
    double probability;
    Vector qubit;
};
std::vector<FourierOutcome> fourier_outcomes(uint64_t x0, uint64_t x1, unsigned n);

struct RspOptions {
    unsigned ell = 8;
    unsigned n = 8;
    bool hide_mode = true;
    ProverPhysics physics = ProverPhysics::ClawSearch;
};

struct RspTranscript {
    int mode_bit = 0;
    std::string pk_hex;
    uint64_t y = 0;
    std::vector<RoundTag> path;
    std::optional<Preimage> preimage;
    std::optional<Z4Vector> d;
    std::optional<Observable> c;
    std::optional<int> v;
    AbortReason abort = AbortReason::None;
    /// Six-state index of the state the verifier believes was prepared (R3b only).
    std::optional<size_t> label;
    std::optional<QracRecord> qrac;

    bool aborted() const {
        return abort != AbortReason::None;
    }
    bool reached(RoundTag tag) const;
    nlohmann::json to_json() const;
};

/// The verifier's state across one protocol instance.
class RspVerifier {
   public:
    /// Draws G uniformly; G = 0 selects a two-to-one key, G = 1 an injective key.
    static RspVerifier begin(const RspOptions &options, Rng &rng);

    int mode_bit() const {
        return g_;
    }
    const TcfKeyPair &keys() const {
        return keys_;
    }
    const TcfPublicKey &message() const {
        return keys_.public_key();
    }

    void receive_image(uint64_t y);
    AbortReason check_preimage(const Preimage &p) const;
    AbortReason receive_equation(const Z4Vector &d);
    /// Applies the measurement-round abort rules; fills `qrac` when the round is a QRAC test.
    AbortReason check_measurement(Observable c, int v, std::optional<QracRecord> &qrac) const;
    size_t prepared_label() const;

   private:
    RspVerifier(int g, TcfKeyPair keys) : g_(g), keys_(std::move(keys)) {
    }
    int g_;
    TcfKeyPair keys_;
    uint64_t y_ = 0;
    int b_hat_ = 0;
    ObservableHint hint_{0, 0};
};

/// Runs one instance of the protocol, with the round type coins drawn from `rng`.
RspTranscript run_rsp_instance(const RspOptions &options, RspProver &prover, Rng &rng);

struct RspSummary {
    uint64_t rounds = 0;
    uint64_t aborts = 0;
    std::array<uint64_t, 2> mode_counts{};
    std::array<uint64_t, 5> tag_counts{};
    std::array<std::array<uint64_t, 6>, 2> labels{};
    QracStatistic qrac;
    std::vector<RspTranscript> transcripts;

    void add(RspTranscript t, bool keep);
    void merge(RspSummary &&other);
    nlohmann::json to_json() const;
};

/// Many independent instances with the honest prover; results do not depend on the worker count.
RspSummary run_rsp_session(
    const RspOptions &options, uint64_t rounds, uint64_t seed, unsigned workers, bool keep_transcripts);

/// The harness-side oracle for a key pair (the prover only ever sees it as a preimage set).
ClawOracle claw_oracle_for(const TcfKeyPair &keys);

}  // namespace nelsim

#endif
