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


#include "nelsim/qcore/extended.h"

#include <cmath>

#include "nelsim/qcore/errors.h"

using namespace nelsim;

const char *nelsim::backend_name(ScalarBackend backend) {
    return backend == ScalarBackend::Float ? "float" : "extended";
}

ScalarBackend nelsim::parse_backend(std::string_view name) {
    if (name == "float") {
        return ScalarBackend::Float;
    }
    if (name == "extended") {
        return ScalarBackend::Extended;
    }
    throw ValidationError("unknown scalar backend '" + std::string(name) + "'");
}

ExtendedReal nelsim::uniform_extended(Rng &rng) {
    constexpr unsigned WORDS = (EXTENDED_BITS + 63) / 64;
    BigInt n = 0;
    for (unsigned k = 0; k < WORDS; k++) {
        n <<= 64;
        n += rng();
    }
    n >>= WORDS * 64 - EXTENDED_BITS;
    return ldexp(ExtendedReal(n), -(int)EXTENDED_BITS);
}

ExtendedReal nelsim::extended_inv_sqrt(const ExtendedReal &x) {
    if (!(x > 0)) {
        throw ValidationError("inverse square root of a non-positive value");
    }
    int e = 0;
    ExtendedReal m = frexp(x, &e);
    if (e & 1) {
        m = ldexp(m, 1);
        e--;
    }
    ExtendedReal y = 1 / std::sqrt(m.convert_to<double>());
    for (int bits = 53; bits < (int)EXTENDED_BITS + 8; bits *= 2) {
        y = ldexp(y * (3 - m * y * y), -1);
    }
    return ldexp(y, -e / 2);
}

ExtendedReal nelsim::extended_sqrt(const ExtendedReal &x) {
    if (x == 0) {
        return ExtendedReal(0);
    }
    ExtendedReal y = extended_inv_sqrt(x);
    ExtendedReal r = x * y;
    return r + ldexp((x - r * r) * y, -1);
}

BigInt nelsim::to_fixed_point(const ExtendedReal &x, unsigned bits) {
    ExtendedReal scaled = round(ldexp(x, (int)bits));
    return scaled.convert_to<BigInt>();
}

BigInt nelsim::to_fixed_point(double x, unsigned bits) {
    return to_fixed_point(ExtendedReal(x), bits);
}

ExtendedReal nelsim::from_fixed_point(const BigInt &numerator, unsigned bits) {
    return ldexp(ExtendedReal(numerator), -(int)bits);
}
