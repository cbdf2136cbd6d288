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

#ifndef NELSIM_TCF_TCF_H
#define NELSIM_TCF_TCF_H

#include <array>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "nelsim/qcore/rng.h"

namespace nelsim {

enum class TcfMode { TwoToOne, Injective };

constexpr unsigned TCF_MIN_BITS = 4;
constexpr unsigned TCF_MAX_BITS = 32;
constexpr size_t FEISTEL_ROUNDS = 8;

/// Keyed alternating Feistel permutation on `width` bits (unbalanced by one bit when width is odd).
class FeistelPermutation {
   public:
    FeistelPermutation(unsigned width, const std::array<uint64_t, FEISTEL_ROUNDS> &keys);

    uint64_t forward(uint64_t z) const;
    uint64_t inverse(uint64_t z) const;
    unsigned width() const {
        return width_;
    }
    const std::array<uint64_t, FEISTEL_ROUNDS> &keys() const {
        return keys_;
    }

   private:
    uint64_t round_value(size_t r, uint64_t half) const;

    unsigned width_;
    unsigned low_bits_;
    std::array<uint64_t, FEISTEL_ROUNDS> keys_;
};

/// Public evaluator: (b, x) with x of n bits maps to an (n+1)-bit image. Exposes no mode.
class TcfPublicKey {
   public:
    static TcfPublicKey from_bytes(const std::vector<uint8_t> &bytes);

    const std::vector<uint8_t> &bytes() const {
        return bytes_;
    }
    unsigned n() const {
        return n_;
    }
    uint64_t eval(int b, uint64_t x) const;
    /// True when the explicit mode byte was stripped at generation time.
    bool mode_hidden() const {
        return !has_tag_;
    }

   private:
    TcfPublicKey(std::vector<uint8_t> bytes, unsigned n, bool has_tag, uint64_t tag_bit, uint64_t shift,
                 FeistelPermutation perm);
    friend class TcfKeyPair;

    std::vector<uint8_t> bytes_;
    unsigned n_;
    bool has_tag_;
    uint64_t tag_bit_;
    uint64_t shift_;
    FeistelPermutation perm_;
};

struct Preimage {
    int b;
    uint64_t x;

    bool operator==(const Preimage &) const = default;
};

class TcfKeyPair {
   public:
    static TcfKeyPair generate(TcfMode mode, unsigned n, Rng &rng, bool hide_mode = false);
    static TcfKeyPair from_json(const nlohmann::json &j);

    TcfMode mode() const {
        return mode_;
    }
    unsigned n() const {
        return pk_.n();
    }
    const TcfPublicKey &public_key() const {
        return pk_;
    }
    const std::vector<uint8_t> &trapdoor() const {
        return td_;
    }
    /// The claw shift of a two-to-one key (zero for injective keys); always has a bit at some even position.
    uint64_t claw_shift() const {
        return delta_;
    }

    uint64_t eval(int b, uint64_t x) const {
        return pk_.eval(b, x);
    }
    /// All preimages of y, ordered by leading bit; throws NoPreimageError outside the image.
    std::vector<Preimage> invert(uint64_t y) const;

    nlohmann::json to_json() const;

   private:
    TcfKeyPair(TcfMode mode, TcfPublicKey pk, std::vector<uint8_t> td, uint64_t delta)
        : mode_(mode), pk_(std::move(pk)), td_(std::move(td)), delta_(delta) {
    }
    TcfMode mode_;
    TcfPublicKey pk_;
    std::vector<uint8_t> td_;
    uint64_t delta_;
};

const char *tcf_mode_name(TcfMode mode);

/// Base-4 digits of an n-bit string, one per consecutive bit pair: digit j = x_(2j) + 2 x_(2j+1).
using Z4Vector = std::vector<uint8_t>;
Z4Vector j_encode(uint64_t x, unsigned n);
/// d . (J(x1) - J(x0)) mod 4.
unsigned z4_theta_code(const Z4Vector &d, uint64_t x0, uint64_t x1, unsigned n);

/// The verifier's expected observable (0 = X, 1 = Y) and outcome for an equation d.
struct ObservableHint {
    int w_bit;
    int v_hat;

    unsigned code() const {
        return (unsigned)(w_bit + 2 * v_hat);
    }
};
/// Undefined (nullopt) when x0 = x1.
std::optional<ObservableHint> w_v_from_d(const Z4Vector &d, uint64_t x0, uint64_t x1, unsigned n);
Z4Vector random_z4_vector(size_t length, Rng &rng);
void validate_z4_vector(const Z4Vector &d, unsigned n);

std::string to_hex(const std::vector<uint8_t> &bytes);
std::vector<uint8_t> from_hex(const std::string &hex);

}  // namespace nelsim

#endif
