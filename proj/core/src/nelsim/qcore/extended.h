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


#ifndef NELSIM_QCORE_EXTENDED_H
#define NELSIM_QCORE_EXTENDED_H

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <string_view>

#include "nelsim/qcore/rng.h"

#ifndef NELSIM_EXTENDED_BITS
#define NELSIM_EXTENDED_BITS 448
#endif

namespace nelsim {

constexpr unsigned EXTENDED_BITS = NELSIM_EXTENDED_BITS;

using ExtendedReal = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<EXTENDED_BITS, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::cpp_int;

enum class ScalarBackend { Float, Extended };

const char *backend_name(ScalarBackend backend);
ScalarBackend parse_backend(std::string_view name);

/// Uniform dyadic rational in [0, 1) carrying EXTENDED_BITS random bits.
ExtendedReal uniform_extended(Rng &rng);

/// Newton-refined square root and inverse square root, accurate to the full mantissa.
ExtendedReal extended_sqrt(const ExtendedReal &x);
ExtendedReal extended_inv_sqrt(const ExtendedReal &x);

/// round(x * 2^bits) as an integer.
BigInt to_fixed_point(const ExtendedReal &x, unsigned bits);
BigInt to_fixed_point(double x, unsigned bits);
ExtendedReal from_fixed_point(const BigInt &numerator, unsigned bits);

}  // namespace nelsim

#endif
