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


#include "nelsim/lhv/lhv.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "nelsim/qcore/errors.h"
#include "nelsim/qcore/haar.h"
#include "nelsim/qcore/named_states.h"
#include "nelsim/qcore/ops.h"
#include "nelsim/qcore/parallel.h"

using namespace nelsim;

namespace {

constexpr unsigned FLOAT_BITS_PER_ELL = 40;
constexpr unsigned EXTENDED_BITS_PER_ELL = 100;
constexpr unsigned FLOAT_MANTISSA = 52;
constexpr unsigned GUARD_BITS = 32;

Vector ket(Complex a0, Complex a1) {
    Vector v(2);
    v << a0, a1;
    return v;
}

Matrix product_with_half_identity(const Vector &a) {
    return kron(outer(a), Matrix(Matrix::Identity(2, 2) / 2.0));
}

double overlap2(const Vector &psi, const Vector &lambda) {
    return std::norm(psi.dot(lambda));
}

void check_mix_q(MixMode mode, double q) {
    double cap = mode == MixMode::Werner ? 0.5 : 1.0 / 3.0;
    if (!(q >= 0 && q <= cap + 1e-12)) {
        throw ValidationError("mixing parameter q out of range for this model");
    }
}

void check_alice_q(double q) {
    if (!(q >= 0 && q <= 1.0 / 3.0 + 1e-12)) {
        throw ValidationError("q > 1/3 makes the |0> branch weight 1-3q negative");
    }
}

void check_bob_q(double q) {
    if (!(q >= 0 && q <= 0.5)) {
        throw ValidationError("q must lie in [0, 1/2]");
    }
}

}  // namespace

Projector Projector::from_ket(const Vector &v) {
    if (v.size() != 2 || std::abs(v.squaredNorm() - 1) > TOLERANCE) {
        throw ValidationError("projector ket must be a normalized qubit vector");
    }
    return Projector(outer(v));
}

Projector Projector::from_matrix(const Matrix &m) {
    if (m.rows() != 2 || m.cols() != 2 || !all_finite(m)) {
        throw ValidationError("projector must be a finite 2x2 matrix");
    }
    if (hermitian_defect(m) > TOLERANCE || max_abs_diff(m * m, m) > TOLERANCE ||
        std::abs(m.trace() - Complex(1, 0)) > TOLERANCE) {
        throw ValidationError("matrix is not a rank-one projector");
    }
    return Projector(m);
}

double Projector::expectation(const Vector &lambda) const {
    return lambda.dot(m_ * lambda).real();
}

std::array<ExtendedReal, 4> EncodedAmplitudes::components() const {
    std::array<ExtendedReal, 4> out;
    for (size_t k = 0; k < 4; k++) {
        out[k] = from_fixed_point(numerators[k], frac_bits);
    }
    return out;
}

Vector EncodedAmplitudes::decode() const {
    auto c = components();
    return ket(Complex(c[0].convert_to<double>(), c[1].convert_to<double>()),
               Complex(c[2].convert_to<double>(), c[3].convert_to<double>()));
}

unsigned nelsim::encoding_bits(ScalarBackend backend, unsigned ell) {
    return (backend == ScalarBackend::Float ? FLOAT_BITS_PER_ELL : EXTENDED_BITS_PER_ELL) * ell;
}

unsigned nelsim::max_encoding_ell(ScalarBackend backend) {
    if (backend == ScalarBackend::Float) {
        return FLOAT_MANTISSA / FLOAT_BITS_PER_ELL;
    }
    return (EXTENDED_BITS - GUARD_BITS) / EXTENDED_BITS_PER_ELL;
}

double nelsim::encoding_bound(ScalarBackend backend, unsigned ell) {
    return std::ldexp(1.0, -(int)encoding_bits(backend, ell));
}

static void check_encoding_budget(ScalarBackend backend, unsigned ell) {
    if (ell == 0 || ell > max_encoding_ell(backend)) {
        throw PrecisionBudgetError("encoding precision ell=" + std::to_string(ell) + " exceeds the " +
                                   backend_name(backend) + " backend budget of " +
                                   std::to_string(max_encoding_ell(backend)));
    }
}

SharedLambda SharedLambda::exact(const PureState &lambda) {
    if (lambda.dim() != 2) {
        throw ValidationError("shared lambda must be a qubit state");
    }
    SharedLambda s;
    s.exact_ = lambda;
    return s;
}

SharedLambda SharedLambda::encode(const PureState &lambda, ScalarBackend backend, unsigned ell) {
    check_encoding_budget(backend, ell);
    SharedLambda s = exact(lambda);
    unsigned bits = encoding_bits(backend, ell);
    EncodedAmplitudes e;
    e.frac_bits = bits;
    const Vector &a = lambda.amplitudes();
    double parts[4] = {a(0).real(), a(0).imag(), a(1).real(), a(1).imag()};
    for (size_t k = 0; k < 4; k++) {
        e.numerators[k] = to_fixed_point(parts[k], bits);
    }
    s.encoded_ = std::move(e);
    s.backend_ = backend;
    s.ell_ = ell;
    return s;
}

SharedLambda SharedLambda::encode(const std::array<ExtendedReal, 4> &lambda, ScalarBackend backend, unsigned ell) {
    check_encoding_budget(backend, ell);
    Vector a = ket(Complex(lambda[0].convert_to<double>(), lambda[1].convert_to<double>()),
                   Complex(lambda[2].convert_to<double>(), lambda[3].convert_to<double>()));
    SharedLambda s = exact(PureState::from_amplitudes(a / a.norm()));
    unsigned bits = encoding_bits(backend, ell);
    EncodedAmplitudes e;
    e.frac_bits = bits;
    for (size_t k = 0; k < 4; k++) {
        e.numerators[k] = to_fixed_point(lambda[k], bits);
    }
    s.encoded_ = std::move(e);
    s.exact_extended_ = lambda;
    s.backend_ = backend;
    s.ell_ = ell;
    return s;
}

Vector SharedLambda::amplitudes() const {
    if (exact_) {
        return exact_->amplitudes();
    }
    return encoded_->decode();
}

std::array<ExtendedReal, 4> nelsim::haar_qubit_extended(Rng &rng) {
    ExtendedReal x, y, s;
    do {
        x = 2 * uniform_extended(rng) - 1;
        y = 2 * uniform_extended(rng) - 1;
        s = x * x + y * y;
    } while (s > 1 || s < 1e-6);
    ExtendedReal w = uniform_extended(rng);
    ExtendedReal r1 = extended_sqrt(1 - w);
    ExtendedReal scale = r1 * extended_inv_sqrt(s);
    return {extended_sqrt(w), ExtendedReal(0), scale * x, scale * y};
}

SharedLambda nelsim::approx_haar(unsigned ell, ScalarBackend backend, Rng &rng) {
    check_encoding_budget(backend, ell);
    if (backend == ScalarBackend::Float) {
        return SharedLambda::encode(haar_qubit(rng), backend, ell);
    }
    return SharedLambda::encode(haar_qubit_extended(rng), backend, ell);
}

OutcomePair nelsim::werner_sim(const Projector &p, const Projector &q, const Vector &lambda, Rng &rng) {
    double pl = p.expectation(lambda);
    double norm = lambda.squaredNorm();
    OutcomePair out;
    out.a = pl < norm - pl ? 1 : 0;
    out.b = rng.bernoulli(q.expectation(lambda)) ? 1 : 0;
    return out;
}

OutcomePair nelsim::werner_mix_sim(MixMode mode, double q, const Projector &p, const Projector &qp,
                                   const Vector &lambda, Rng &rng) {
    check_mix_q(mode, q);
    double u = rng.uniform();
    if (u < 2 * q) {
        return werner_sim(p, qp, lambda, rng);
    }
    OutcomePair out;
    if (mode == MixMode::Werner) {
        out.a = rng.bernoulli(0.5) ? 1 : 0;
    } else {
        static const Vector zero = ket(1, 0);
        static const Vector minus = ket(M_SQRT1_2, -M_SQRT1_2);
        const Vector &basis = u < 1 - q ? zero : minus;
        out.a = rng.bernoulli(p.expectation(basis)) ? 1 : 0;
    }
    out.b = rng.bernoulli(0.5) ? 1 : 0;
    return out;
}

DensityMatrix nelsim::werner_mix_realized_state(MixMode mode, double q) {
    check_mix_q(mode, q);
    if (mode == MixMode::Werner) {
        return werner(q);
    }
    Matrix m = 2 * q * werner(0.5).matrix() + (1 - 3 * q) * product_with_half_identity(ket(1, 0)) +
               q * product_with_half_identity(ket(M_SQRT1_2, -M_SQRT1_2));
    return DensityMatrix::from_matrix(m);
}

HirschModel HirschModel::make(double q, const DensityMatrix &sigma_a, const DensityMatrix &sigma_b) {
    check_bob_q(q);
    if (sigma_a.dim() != 2 || sigma_b.dim() != 2) {
        throw ValidationError("Hirsch model needs single-qubit sigma_A and sigma_B");
    }
    HirschModel m;
    m.q = q;
    m.sigma_a = sigma_a;
    m.sigma_b = sigma_b;
    return m;
}

DensityMatrix HirschModel::target_state() const {
    return hirsch(q, sigma_a, sigma_b);
}

DensityMatrix HirschModel::realized_state() const {
    check_alice_q(q);
    Matrix core = werner_mix_realized_state(MixMode::Rho0, std::min(q, 1.0 / 3.0)).matrix();
    Matrix ca = partial_trace(core, KEEP_A);
    Matrix cb = partial_trace(core, KEEP_B);
    const Matrix &sa = sigma_a.matrix();
    const Matrix &sb = sigma_b.matrix();
    return DensityMatrix::from_matrix((core + kron(ca, sb) + kron(sa, cb) + kron(sa, sb)) / 4.0);
}

LocalResponse LocalResponse::from_fine(const FineGrainedPovm &povm, const DensityMatrix &sigma) {
    if (povm.dim != 2 || sigma.dim() != 2) {
        throw ValidationError("local response needs a qubit POVM and a qubit sigma");
    }
    static const Vector minus = ket(M_SQRT1_2, -M_SQRT1_2);
    LocalResponse r;
    for (const FineElement &e : povm.elements) {
        if (e.weight <= 0) {
            continue;
        }
        r.labels.push_back(e.coarse);
        r.weights.push_back(e.weight);
        r.kets.push_back(e.ket);
        for (size_t c = 0; c < 2; c++) {
            r.input_law[c].push_back(e.weight * std::norm(e.ket(c)));
        }
        r.sigma_law.push_back(e.weight * e.ket.dot(sigma.matrix() * e.ket).real());
        r.zero_overlap.push_back(std::norm(e.ket(0)));
        r.minus_overlap.push_back(std::norm(minus.dot(e.ket)));
    }
    return r;
}

SharedCoins nelsim::draw_shared_coins(Rng &rng) {
    return SharedCoins{rng.uniform()};
}

AliceCoins nelsim::draw_alice_coins(Rng &rng) {
    AliceCoins c;
    c.input = rng.uniform();
    c.outcome = rng.uniform();
    c.c2 = rng.uniform();
    c.c3 = rng.uniform();
    c.resample = rng.uniform();
    return c;
}

BobCoins nelsim::draw_bob_coins(Rng &rng) {
    BobCoins c;
    c.input = rng.uniform();
    c.outcome = rng.uniform();
    c.c1 = rng.uniform();
    c.c2 = rng.uniform();
    c.resample = rng.uniform();
    return c;
}

size_t nelsim::alice_branch(double q, double u) {
    if (u < 2 * q) {
        return 0;
    }
    return u < 1 - q ? 1 : 2;
}

size_t nelsim::bob_branch(double q, double u) {
    return u < 2 * q ? 0 : 1;
}

size_t nelsim::draw_first_outcome(const LocalResponse &party, double input, double outcome) {
    size_t c0 = input < 0.5 ? 0 : 1;
    return sample_index(party.input_law[c0], outcome);
}

PartyAnswer nelsim::alice_sim_ideal(double q, const LocalResponse &party, const Vector &lambda,
                                    const SharedCoins &shared, const AliceCoins &coins) {
    check_alice_q(q);
    PartyAnswer ans;
    ans.first_draw = draw_first_outcome(party, coins.input, coins.outcome);
    ans.branch = alice_branch(q, shared.branch);
    size_t k = ans.first_draw;
    switch (ans.branch) {
        case 0: {
            double pl = overlap2(party.kets[k], lambda);
            ans.kept = pl < lambda.squaredNorm() - pl;
            break;
        }
        case 1:
            ans.kept = coins.c2 < party.zero_overlap[k];
            break;
        default:
            ans.kept = coins.c3 < party.minus_overlap[k];
            break;
    }
    ans.index = ans.kept ? k : sample_index(party.sigma_law, coins.resample);
    return ans;
}

PartyAnswer nelsim::bob_sim_ideal(double q, const LocalResponse &party, const Vector &lambda,
                                  const SharedCoins &shared, const BobCoins &coins) {
    check_bob_q(q);
    PartyAnswer ans;
    ans.first_draw = draw_first_outcome(party, coins.input, coins.outcome);
    ans.branch = bob_branch(q, shared.branch);
    size_t k = ans.first_draw;
    if (ans.branch == 0) {
        ans.kept = coins.c1 < overlap2(party.kets[k], lambda);
    } else {
        ans.kept = coins.c2 < 0.5;
    }
    ans.index = ans.kept ? k : sample_index(party.sigma_law, coins.resample);
    return ans;
}

LhvOutcomeTable LhvOutcomeTable::make(size_t num_a, size_t num_b) {
    LhvOutcomeTable t;
    t.num_a = num_a;
    t.num_b = num_b;
    t.counts.assign(num_a * num_b, 0);
    return t;
}

void LhvOutcomeTable::add(size_t a, size_t b) {
    counts[a * num_b + b]++;
    samples++;
}

void LhvOutcomeTable::merge(const LhvOutcomeTable &other) {
    if (counts.empty()) {
        *this = other;
        return;
    }
    if (other.counts.empty()) {
        return;
    }
    if (other.num_a != num_a || other.num_b != num_b) {
        throw ValidationError("cannot merge outcome tables of different shapes");
    }
    for (size_t k = 0; k < counts.size(); k++) {
        counts[k] += other.counts[k];
    }
    samples += other.samples;
}

uint64_t LhvOutcomeTable::count(size_t a, size_t b) const {
    return counts[a * num_b + b];
}

double LhvOutcomeTable::mc_prob(size_t a, size_t b) const {
    return samples == 0 ? 0.0 : (double)count(a, b) / (double)samples;
}

double LhvOutcomeTable::sigma(double p) const {
    return samples == 0 ? 0.0 : std::sqrt(std::max(p * (1 - p), 0.0) / (double)samples);
}

std::vector<double> LhvOutcomeTable::distribution() const {
    std::vector<double> d(counts.size());
    for (size_t k = 0; k < counts.size(); k++) {
        d[k] = samples == 0 ? 0.0 : (double)counts[k] / (double)samples;
    }
    return d;
}

double LhvOutcomeTable::total_variation(const std::vector<double> &exact) const {
    if (exact.size() != counts.size()) {
        throw ValidationError("exact table shape mismatch");
    }
    auto d = distribution();
    double tv = 0;
    for (size_t k = 0; k < d.size(); k++) {
        tv += std::abs(d[k] - exact[k]);
    }
    return tv / 2;
}

double LhvOutcomeTable::max_z(const std::vector<double> &exact) const {
    if (exact.size() != counts.size()) {
        throw ValidationError("exact table shape mismatch");
    }
    auto d = distribution();
    double worst = 0;
    for (size_t k = 0; k < d.size(); k++) {
        double s = sigma(exact[k]);
        if (s > 0) {
            worst = std::max(worst, std::abs(d[k] - exact[k]) / s);
        } else if (d[k] > 0) {
            worst = std::numeric_limits<double>::infinity();
        }
    }
    return worst;
}

std::string LhvOutcomeTable::to_csv(const std::vector<double> &exact) const {
    if (exact.size() != counts.size()) {
        throw ValidationError("exact table shape mismatch");
    }
    std::ostringstream out;
    out.precision(10);
    out << "a,b,count,exact_prob,mc_prob,sigma\n";
    for (size_t a = 0; a < num_a; a++) {
        for (size_t b = 0; b < num_b; b++) {
            double p = exact[a * num_b + b];
            out << a << ',' << b << ',' << count(a, b) << ',' << p << ',' << mc_prob(a, b) << ',' << sigma(p)
                << '\n';
        }
    }
    return out.str();
}

std::vector<double> nelsim::joint_table(const DensityMatrix &rho, const Povm &povm_a, const Povm &povm_b) {
    if (povm_a.dim() * povm_b.dim() != rho.dim()) {
        throw ValidationError("POVM dimensions do not match the state");
    }
    std::vector<double> t;
    t.reserve(povm_a.size() * povm_b.size());
    for (size_t a = 0; a < povm_a.size(); a++) {
        for (size_t b = 0; b < povm_b.size(); b++) {
            t.push_back(trace_product(kron(povm_a[a], povm_b[b]), rho.matrix()).real());
        }
    }
    return t;
}

std::vector<double> nelsim::hirsch_trace_formula(const HirschModel &model, const FineGrainedPovm &povm_a,
                                                 const FineGrainedPovm &povm_b) {
    Matrix r0 = rho0(model.q).matrix();
    Matrix ra = partial_trace(r0, KEEP_A);
    Matrix rb = partial_trace(r0, KEEP_B);
    std::vector<double> t(povm_a.num_coarse * povm_b.num_coarse, 0.0);
    for (const FineElement &ea : povm_a.elements) {
        Matrix pa = ea.projector();
        double pa_sa = trace_product(pa, model.sigma_a.matrix()).real();
        double pa_ra = trace_product(pa, ra).real();
        for (const FineElement &eb : povm_b.elements) {
            Matrix qb = eb.projector();
            double qb_sb = trace_product(qb, model.sigma_b.matrix()).real();
            double qb_rb = trace_product(qb, rb).real();
            double joint = trace_product(kron(pa, qb), r0).real();
            double value = ea.weight * eb.weight / 4 * (joint + pa_sa * qb_sb + pa_ra * qb_sb + pa_sa * qb_rb);
            t[ea.coarse * povm_b.num_coarse + eb.coarse] += value;
        }
    }
    return t;
}

LhvOutcomeTable nelsim::werner_mix_mc(MixMode mode, double q, const Projector &p, const Projector &qp,
                                      uint64_t samples, uint64_t seed, unsigned workers) {
    check_mix_q(mode, q);
    auto body = [&](Rng &rng, uint64_t count, LhvOutcomeTable &acc) {
        acc = LhvOutcomeTable::make(2, 2);
        for (uint64_t i = 0; i < count; i++) {
            Vector lambda = haar_qubit(rng).amplitudes();
            OutcomePair o = werner_mix_sim(mode, q, p, qp, lambda, rng);
            acc.add(o.a, o.b);
        }
    };
    auto merge = [](LhvOutcomeTable &into, const LhvOutcomeTable &part) { into.merge(part); };
    return run_chunked<LhvOutcomeTable>(samples, LHV_CHUNK, seed, 0x1e41, workers, body, merge);
}

LhvOutcomeTable nelsim::hirsch_mc(const HirschModel &model, const FineGrainedPovm &povm_a,
                                  const FineGrainedPovm &povm_b, uint64_t samples, uint64_t seed,
                                  unsigned workers) {
    check_alice_q(model.q);
    LocalResponse ra = LocalResponse::from_fine(povm_a, model.sigma_a);
    LocalResponse rb = LocalResponse::from_fine(povm_b, model.sigma_b);
    auto body = [&](Rng &rng, uint64_t count, LhvOutcomeTable &acc) {
        acc = LhvOutcomeTable::make(povm_a.num_coarse, povm_b.num_coarse);
        for (uint64_t i = 0; i < count; i++) {
            Vector lambda = haar_qubit(rng).amplitudes();
            SharedCoins shared = draw_shared_coins(rng);
            AliceCoins ca = draw_alice_coins(rng);
            BobCoins cb = draw_bob_coins(rng);
            PartyAnswer a = alice_sim_ideal(model.q, ra, lambda, shared, ca);
            PartyAnswer b = bob_sim_ideal(model.q, rb, lambda, shared, cb);
            acc.add(ra.labels[a.index], rb.labels[b.index]);
        }
    };
    auto merge = [](LhvOutcomeTable &into, const LhvOutcomeTable &part) { into.merge(part); };
    return run_chunked<LhvOutcomeTable>(samples, LHV_CHUNK, seed, 0x1e42, workers, body, merge);
}
