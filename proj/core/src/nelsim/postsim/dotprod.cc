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


#include "nelsim/postsim/dotprod.h"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <algorithm>
#include <map>
#include <numeric>
#include <utility>

#include "nelsim/qcore/errors.h"

using namespace nelsim;

namespace {

constexpr double PASS_FRACTION = 0.735;
constexpr double THIN_LEVEL = 0.55;
constexpr double REAL_TOLERANCE = 1e-12;

Vector ket(Complex a0, Complex a1) {
    Vector v(2);
    v << a0, a1;
    return v;
}

template <class T>
T pow2(int e);

template <>
double pow2<double>(int e) {
    return std::ldexp(1.0, e);
}

template <>
ExtendedReal pow2<ExtendedReal>(int e) {
    return boost::multiprecision::ldexp(ExtendedReal(1), e);
}

double root(double x) {
    return std::sqrt(x);
}

ExtendedReal root(const ExtendedReal &x) {
    return x > 0 ? extended_sqrt(x) : ExtendedReal(0);
}

double to_double(double x) {
    return x;
}

double to_double(const ExtendedReal &x) {
    return static_cast<double>(x);
}

template <class T>
T from_extended(const ExtendedReal &x);

template <>
double from_extended<double>(const ExtendedReal &x) {
    return static_cast<double>(x);
}

template <>
ExtendedReal from_extended<ExtendedReal>(const ExtendedReal &x) {
    return x;
}

/// P[Bin(n, p) >= k].
double binomial_tail(unsigned n, unsigned k, double p) {
    if (k == 0 || p >= 1) {
        return 1;
    }
    if (k > n || p <= 0) {
        return 0;
    }
    using DoublePolicy = boost::math::policies::policy<boost::math::policies::promote_double<false>>;
    return boost::math::ibeta((double)k, (double)(n - k + 1), p, DoublePolicy());
}

double thin_level_tail(unsigned n, unsigned k) {
    thread_local std::map<std::pair<unsigned, unsigned>, double> cache;
    auto key = std::make_pair(n, k);
    auto it = cache.find(key);
    if (it != cache.end()) {
        return it->second;
    }
    double t = binomial_tail(n, k, THIN_LEVEL);
    cache.emplace(key, t);
    return t;
}

/// Inverse-CDF draw of Bin(count, p) for small p.
size_t small_binomial(size_t count, double p, double u) {
    if (count == 0 || p <= 0) {
        return 0;
    }
    double pmf = std::exp((double)count * std::log1p(-p));
    double cdf = pmf;
    size_t k = 0;
    while (u >= cdf && k < count) {
        pmf *= (double)(count - k) / (double)(k + 1) * p / (1 - p);
        k++;
        cdf += pmf;
    }
    return k;
}

double plus_probability(double z2, double d, double r) {
    double x = r * d * M_SQRT1_2;
    double den = 2 * (z2 * z2 + x * x);
    if (den == 0) {
        throw ZeroBranchError("sub3 postselection has zero amplitude");
    }
    return std::min(1.0, (z2 + x) * (z2 + x) / den);
}

/// Contiguous sweep indices whose |+> probability is at least the thinning level (empty when lo > hi).
struct HighRange {
    int lo = 1;
    int hi = 0;

    int size() const {
        return hi >= lo ? hi - lo + 1 : 0;
    }
};

/// The |+> probability is unimodal in the sweep index with its peak near r = sqrt(2) z2 / d, so the high points form
/// one interval around the peak.
HighRange high_range(double z2, double d, const Sub3Params &params) {
    HighRange range;
    if (d <= 0) {
        return range;
    }
    double peak = std::log2(M_SQRT2 * z2 / d);
    int start = (int)std::clamp(std::lround(peak), (long)params.sweep_low(), (long)params.sweep_high());
    if (plus_probability(z2, d, std::ldexp(1.0, start)) < THIN_LEVEL) {
        return range;
    }
    range.lo = range.hi = start;
    while (range.lo > params.sweep_low() &&
           plus_probability(z2, d, std::ldexp(1.0, range.lo - 1)) >= THIN_LEVEL) {
        range.lo--;
    }
    while (range.hi < params.sweep_high() &&
           plus_probability(z2, d, std::ldexp(1.0, range.hi + 1)) >= THIN_LEVEL) {
        range.hi++;
    }
    return range;
}

void check_params(const Sub3Params &params) {
    if (params.m == 0) {
        throw ValidationError("sub3 precision m must be positive");
    }
}

template <class T>
void check_band(const T &z1, const T &z2, const Sub3Params &params) {
    double a = std::abs(to_double(z1)), b = std::abs(to_double(z2));
    double norm = std::hypot(a, b);
    if (norm == 0) {
        throw ZeroBranchError("sub3 input has two zero amplitudes");
    }
    double lo = std::ldexp(1.0, params.sweep_low());
    double hi = std::ldexp(1.0, params.sweep_high());
    for (double z : {a / norm, b / norm}) {
        if (z != 0 && (z <= lo || z >= hi)) {
            throw UndeterminedError("sub3 amplitude outside the resolvable band");
        }
    }
}

}  // namespace

Circuit nelsim::sub1_circuit() {
    Circuit c(2);
    c.cx(0, 1).post(1, 0);
    return c;
}

Circuit nelsim::sub2_circuit() {
    return sub1_circuit();
}

Circuit nelsim::sub3_circuit() {
    Circuit c(2);
    c.ch(0, 1).post(1, 1);
    return c;
}

namespace {

Vector check_real_qubit(const Vector &state) {
    if (state.size() != 2) {
        throw ValidationError("subroutine input must be a single qubit");
    }
    if (std::abs(state(0).imag()) > REAL_TOLERANCE || std::abs(state(1).imag()) > REAL_TOLERANCE) {
        throw ValidationError("subroutine input must have real amplitudes");
    }
    if (state.squaredNorm() == 0) {
        throw ValidationError("subroutine input is the zero vector");
    }
    return state / state.norm();
}

PostState first_qubit_result(const Circuit &c, const Vector &input) {
    PostState st = run_postselected(c, input);
    uint64_t rest = 0;
    for (const Gate &g : c.gates()) {
        if (g.kind == GateKind::Post) {
            rest = (uint64_t)g.value;
        }
    }
    Vector q = first_qubit_amplitudes(st.amplitudes, c.qubits(), rest);
    return PostState{q / q.norm(), st.success_probability};
}

}  // namespace

PostState nelsim::sub1_square(const Vector &state) {
    Vector s = check_real_qubit(state);
    return first_qubit_result(sub1_circuit(), kron(s, s));
}

PostState nelsim::sub2_scale(double beta, const Vector &state) {
    Vector s = check_real_qubit(state);
    Vector control = ket(1.0, beta);
    return first_qubit_result(sub2_circuit(), kron(control / control.norm(), s));
}

PostState nelsim::sub3_point(double alpha, double beta, const Vector &state) {
    Vector s = check_real_qubit(state);
    Vector control = ket(alpha, beta);
    if (control.squaredNorm() == 0) {
        throw ValidationError("sub3 control amplitudes are both zero");
    }
    return first_qubit_result(sub3_circuit(), kron(control / control.norm(), s));
}

const char *nelsim::comparison_name(Comparison c) {
    return c == Comparison::GreaterByMargin ? "GreaterByMargin" : "Less";
}

double nelsim::sub3_plus_probability(double z1, double z2, double r) {
    return plus_probability(z2, z1 - z2, r);
}

unsigned Sub3Params::pass_count() const {
    return (unsigned)std::ceil(PASS_FRACTION * (double)shot_count() - 1e-9);
}

double nelsim::sub3_point_pass_probability(const Sub3Params &params, double p) {
    return binomial_tail(params.shot_count(), params.pass_count(), p);
}

template <class T>
Comparison nelsim::sub3_compare(const T &z1, const T &z2, const Sub3Params &params, Rng &rng) {
    check_params(params);
    check_band(z1, z2, params);
    if (z2 == 0) {
        return Comparison::GreaterByMargin;
    }
    T d = z1 - z2;
    double zd = to_double(z2), dd = to_double(d);
    if (zd < 0) {
        zd = -zd;
        dd = -dd;
    }
    unsigned n = params.shot_count(), k = params.pass_count();
    HighRange high = high_range(zd, dd, params);
    for (int i = high.lo; i <= high.hi; i++) {
        if (rng.bernoulli(binomial_tail(n, k, plus_probability(zd, dd, std::ldexp(1.0, i))))) {
            return Comparison::GreaterByMargin;
        }
    }
    int points = params.sweep_high() - params.sweep_low() + 1;
    size_t low_count = (size_t)(points - high.size());
    double tau = thin_level_tail(n, k);
    size_t picks = small_binomial(low_count, tau, rng.uniform());
    std::vector<size_t> chosen;
    bool pass = false;
    while (chosen.size() < picks) {
        size_t j = (size_t)rng.below(low_count);
        if (std::find(chosen.begin(), chosen.end(), j) != chosen.end()) {
            continue;
        }
        chosen.push_back(j);
        int i = params.sweep_low() + (int)j;
        if (high.size() > 0 && i >= high.lo) {
            i += high.size();
        }
        if (rng.bernoulli(binomial_tail(n, k, plus_probability(zd, dd, std::ldexp(1.0, i))) / tau)) {
            pass = true;
        }
    }
    return pass ? Comparison::GreaterByMargin : Comparison::Less;
}

template Comparison nelsim::sub3_compare<double>(const double &, const double &, const Sub3Params &, Rng &);
template Comparison nelsim::sub3_compare<ExtendedReal>(const ExtendedReal &, const ExtendedReal &,
                                                       const Sub3Params &, Rng &);

Comparison nelsim::sub3_compare_shots(double z1, double z2, const Sub3Params &params, Rng &rng) {
    check_params(params);
    check_band(z1, z2, params);
    if (z2 == 0) {
        return Comparison::GreaterByMargin;
    }
    for (int i = params.sweep_low(); i <= params.sweep_high(); i++) {
        double p = sub3_plus_probability(z1, z2, std::ldexp(1.0, i));
        unsigned plus = 0;
        for (unsigned s = 0; s < params.shot_count(); s++) {
            plus += rng.bernoulli(p) ? 1 : 0;
        }
        if (plus >= params.pass_count()) {
            return Comparison::GreaterByMargin;
        }
    }
    return Comparison::Less;
}

double nelsim::sub3_greater_probability(double z1, double z2, const Sub3Params &params) {
    check_params(params);
    check_band(z1, z2, params);
    if (z2 == 0) {
        return 1;
    }
    double miss = 1;
    for (int i = params.sweep_low(); i <= params.sweep_high(); i++) {
        miss *= 1 - sub3_point_pass_probability(params, sub3_plus_probability(z1, z2, std::ldexp(1.0, i)));
    }
    return 1 - miss;
}

template <class T>
Sub4Result<T> nelsim::sub4_binary_search(const T &e1, const T &e2, unsigned ell, Rng &rng) {
    if (ell == 0) {
        throw ValidationError("sub4 precision must be positive");
    }
    T s1 = e1 * e1, s2 = e2 * e2;
    if (s1 == 0 && s2 == 0) {
        throw ValidationError("sub4 input is the zero vector");
    }
    Sub4Result<T> res;
    if (s2 == 0) {
        res.ratio_infinite = true;
        res.beta0 = pow2<T>(2 * (int)ell + 2);
        return res;
    }
    Sub3Params params{ell + 2, 0};
    auto greater = [&](const T &beta) {
        res.comparisons++;
        T scaled = beta * s2;
        return sub3_compare<T>(s1, scaled, params, rng) == Comparison::GreaterByMargin;
    };
    T lo = pow2<T>(-2 * (int)ell - 2);
    T hi = pow2<T>(2 * (int)ell + 2);
    if (greater(hi)) {
        res.ratio_infinite = true;
        res.beta0 = hi;
        return res;
    }
    if (!greater(lo)) {
        res.beta0 = lo;
        return res;
    }
    T width = pow2<T>(-2 * (int)ell);
    while (hi - lo > width * lo) {
        T mid = root(T(lo * hi));
        if (greater(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    res.beta0 = root(T(lo * hi));
    return res;
}

template Sub4Result<double> nelsim::sub4_binary_search<double>(const double &, const double &, unsigned, Rng &);
template Sub4Result<ExtendedReal> nelsim::sub4_binary_search<ExtendedReal>(const ExtendedReal &,
                                                                           const ExtendedReal &, unsigned, Rng &);

DotTarget DotTarget::from_vector(const Vector &v) {
    if (v.size() != 2) {
        throw ValidationError("dot-product target must be a single qubit");
    }
    return DotTarget{{ExtendedReal(v(0).real()), ExtendedReal(v(0).imag()), ExtendedReal(v(1).real()),
                      ExtendedReal(v(1).imag())}};
}

DotTarget DotTarget::from_lambda(const SharedLambda &lambda) {
    if (lambda.encoded()) {
        return DotTarget{lambda.encoded()->components()};
    }
    if (lambda.exact_components()) {
        return DotTarget{*lambda.exact_components()};
    }
    return from_vector(lambda.amplitudes());
}

DotTarget DotTarget::ket0() {
    return DotTarget{{ExtendedReal(1), ExtendedReal(0), ExtendedReal(0), ExtendedReal(0)}};
}

DotTarget DotTarget::minus() {
    ExtendedReal h = extended_inv_sqrt(ExtendedReal(2));
    return DotTarget{{h, ExtendedReal(0), ExtendedReal(-h), ExtendedReal(0)}};
}

Vector DotTarget::to_vector() const {
    return ket(Complex(to_double(components[0]), to_double(components[1])),
               Complex(to_double(components[2]), to_double(components[3])));
}

unsigned nelsim::max_dot_product_ell(ScalarBackend backend) {
    return backend == ScalarBackend::Float ? 16 : 64;
}

namespace {

constexpr unsigned SEARCH_GUARD = 3;

template <class T>
DotProductResult estimate(const Vector &psi, const DotTarget &target, unsigned ell, Rng &rng) {
    T g1 = T(psi(0).real()), g2 = T(psi(1).real());
    Sub4Result<T> s4 = sub4_binary_search<T>(g1, g2, ell + SEARCH_GUARD, rng);
    DotProductResult res;
    res.ratio_infinite = s4.ratio_infinite;
    res.comparisons = s4.comparisons;
    res.beta0 = to_double(s4.beta0);
    T a1, a2;
    if (s4.ratio_infinite) {
        a1 = T(1);
        a2 = T(0);
    } else {
        double sb = std::sqrt(res.beta0);
        double x1 = psi(0).real(), x2 = psi(1).real();
        double num = x1 + sb * x2;
        double p_plus = num * num / (2 * (x1 * x1 + res.beta0 * x2 * x2));
        unsigned shots = 2 * ell + 1, plus = 0;
        for (unsigned k = 0; k < shots; k++) {
            plus += rng.bernoulli(p_plus) ? 1 : 0;
        }
        res.sign = 2 * plus > shots ? 1 : -1;
        T inv = T(1) / (T(1) + s4.beta0);
        a1 = root(T(s4.beta0 * inv));
        a2 = root(inv);
        if (res.sign < 0) {
            a2 = -a2;
        }
    }
    const auto &t = target.components;
    T re = a1 * from_extended<T>(t[0]) + a2 * from_extended<T>(t[2]);
    T im = a1 * from_extended<T>(t[1]) + a2 * from_extended<T>(t[3]);
    res.value = std::clamp(to_double(T(re * re + im * im)), 0.0, 1.0);
    return res;
}

}  // namespace

DotProductResult nelsim::dot_product_estimate(const Vector &psi, const DotTarget &target,
                                              const DotProductOptions &opts, Rng &rng) {
    if (opts.ell == 0 || opts.ell > max_dot_product_ell(opts.backend)) {
        throw PrecisionBudgetError("dot-product precision " + std::to_string(opts.ell) + " exceeds the " +
                                   backend_name(opts.backend) + " backend cap " +
                                   std::to_string(max_dot_product_ell(opts.backend)));
    }
    if (psi.size() != 2) {
        throw ValidationError("dot-product supply state must be a single qubit");
    }
    if (std::abs(psi(0).imag()) > REAL_TOLERANCE || std::abs(psi(1).imag()) > REAL_TOLERANCE) {
        throw UndeterminedError("dot-product supply state must have real amplitudes");
    }
    double lo = std::ldexp(1.0, -(int)opts.ell), hi = std::ldexp(1.0, (int)opts.ell);
    for (int k = 0; k < 2; k++) {
        double g = std::abs(psi(k).real());
        if (g != 0 && (g <= lo || g >= hi)) {
            throw UndeterminedError("dot-product supply amplitude outside the resolvable band");
        }
    }
    if (opts.backend == ScalarBackend::Float) {
        return estimate<double>(psi, target, opts.ell, rng);
    }
    return estimate<ExtendedReal>(psi, target, opts.ell, rng);
}

DotProductResult nelsim::dot_product_with_eigenvector(const EigenPair &pair, const DotTarget &target,
                                                      const DotProductOptions &opts, Rng &rng) {
    if (pair.is_zero()) {
        throw ValidationError("outcome has a zero POVM element");
    }
    return dot_product_estimate(pair.psi->amplitudes(), target, opts, rng);
}

DotProductResult nelsim::dot_product_with_eigenvector(uint64_t a, const Circuit &c, const DotTarget &target,
                                                      const DotProductOptions &opts, Rng &rng) {
    return dot_product_with_eigenvector(eigenvector_from_circuit(c, a), target, opts, rng);
}
