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

#include "nelsim/tcf/tcf.h"

#include "nelsim/qcore/errors.h"

namespace nelsim {

namespace {

constexpr uint8_t PK_VERSION = 1;
constexpr uint8_t FLAG_MODE_TAG = 1;

uint64_t mask_bits(unsigned bits) {
    return bits >= 64 ? ~uint64_t{0} : (uint64_t{1} << bits) - 1;
}

void put_le(std::vector<uint8_t> &out, uint64_t v, size_t bytes) {
    for (size_t k = 0; k < bytes; k++) {
        out.push_back((uint8_t)(v >> (8 * k)));
    }
}

uint64_t get_le(const std::vector<uint8_t> &in, size_t &pos, size_t bytes) {
    if (pos + bytes > in.size()) {
        throw ValidationError("key bytes are truncated");
    }
    uint64_t v = 0;
    for (size_t k = 0; k < bytes; k++) {
        v |= (uint64_t)in[pos + k] << (8 * k);
    }
    pos += bytes;
    return v;
}

void check_bits(unsigned n) {
    if (n % 2 != 0 || n < TCF_MIN_BITS || n > TCF_MAX_BITS) {
        throw ValidationError(
            "preimage length must be even and within " + std::to_string(TCF_MIN_BITS) + ".." +
            std::to_string(TCF_MAX_BITS) + ", got " + std::to_string(n));
    }
}

}  // namespace

FeistelPermutation::FeistelPermutation(unsigned width, const std::array<uint64_t, FEISTEL_ROUNDS> &keys)
    : width_(width), low_bits_(width / 2), keys_(keys) {
    if (width < 2 || width > 63) {
        throw ValidationError("Feistel width out of range");
    }
}

uint64_t FeistelPermutation::round_value(size_t r, uint64_t half) const {
    return splitmix64(keys_[r] ^ splitmix64(half + r));
}

uint64_t FeistelPermutation::forward(uint64_t z) const {
    unsigned high_bits = width_ - low_bits_;
    uint64_t lo = z & mask_bits(low_bits_);
    uint64_t hi = (z >> low_bits_) & mask_bits(high_bits);
    for (size_t r = 0; r < FEISTEL_ROUNDS; r++) {
        if (r % 2 == 0) {
            hi ^= round_value(r, lo) & mask_bits(high_bits);
        } else {
            lo ^= round_value(r, hi) & mask_bits(low_bits_);
        }
    }
    return (hi << low_bits_) | lo;
}

uint64_t FeistelPermutation::inverse(uint64_t z) const {
    unsigned high_bits = width_ - low_bits_;
    uint64_t lo = z & mask_bits(low_bits_);
    uint64_t hi = (z >> low_bits_) & mask_bits(high_bits);
    for (size_t r = FEISTEL_ROUNDS; r-- > 0;) {
        if (r % 2 == 0) {
            hi ^= round_value(r, lo) & mask_bits(high_bits);
        } else {
            lo ^= round_value(r, hi) & mask_bits(low_bits_);
        }
    }
    return (hi << low_bits_) | lo;
}

TcfPublicKey::TcfPublicKey(
    std::vector<uint8_t> bytes, unsigned n, bool has_tag, uint64_t tag_bit, uint64_t shift, FeistelPermutation perm)
    : bytes_(std::move(bytes)), n_(n), has_tag_(has_tag), tag_bit_(tag_bit), shift_(shift), perm_(perm) {
}

TcfPublicKey TcfPublicKey::from_bytes(const std::vector<uint8_t> &bytes) {
    size_t pos = 0;
    if (get_le(bytes, pos, 1) != PK_VERSION) {
        throw ValidationError("unsupported public key version");
    }
    unsigned n = (unsigned)get_le(bytes, pos, 1);
    check_bits(n);
    uint64_t flags = get_le(bytes, pos, 1);
    bool has_tag = (flags & FLAG_MODE_TAG) != 0;
    if (has_tag) {
        uint64_t tag = get_le(bytes, pos, 1);
        if (tag > 1) {
            throw ValidationError("bad mode tag in public key");
        }
    }
    uint64_t tag_bit = get_le(bytes, pos, 1);
    uint64_t shift = get_le(bytes, pos, 4);
    if (tag_bit > 1 || (shift & ~mask_bits(n)) != 0) {
        throw ValidationError("bad evaluation parameters in public key");
    }
    std::array<uint64_t, FEISTEL_ROUNDS> keys{};
    for (auto &k : keys) {
        k = get_le(bytes, pos, 8);
    }
    if (pos != bytes.size()) {
        throw ValidationError("public key has trailing bytes");
    }
    return TcfPublicKey(bytes, n, has_tag, tag_bit, shift, FeistelPermutation(n + 1, keys));
}

uint64_t TcfPublicKey::eval(int b, uint64_t x) const {
    if (b != 0 && b != 1) {
        throw ValidationError("leading bit must be 0 or 1");
    }
    if ((x & ~mask_bits(n_)) != 0) {
        throw ValidationError("preimage has more than n bits");
    }
    uint64_t bb = (uint64_t)b;
    uint64_t z = ((bb * tag_bit_) << n_) | (x ^ (bb * shift_));
    return perm_.forward(z);
}

TcfKeyPair TcfKeyPair::generate(TcfMode mode, unsigned n, Rng &rng, bool hide_mode) {
    check_bits(n);
    std::array<uint64_t, FEISTEL_ROUNDS> keys{};
    for (auto &k : keys) {
        k = rng();
    }
    uint64_t delta = 0;
    if (mode == TcfMode::TwoToOne) {
        // Some J digit of the claw difference must be odd, or the equation code never reaches 1 or 3.
        const uint64_t low_digit_bits = 0x5555'5555'5555'5555ull & mask_bits(n);
        do {
            delta = 1 + rng.below(mask_bits(n));
        } while ((delta & low_digit_bits) == 0);
    }
    uint64_t tag_bit = mode == TcfMode::Injective ? 1 : 0;
    uint64_t shift = delta;

    std::vector<uint8_t> pk;
    put_le(pk, PK_VERSION, 1);
    put_le(pk, n, 1);
    put_le(pk, hide_mode ? 0 : FLAG_MODE_TAG, 1);
    if (!hide_mode) {
        put_le(pk, tag_bit, 1);
    }
    put_le(pk, tag_bit, 1);
    put_le(pk, shift, 4);
    for (uint64_t k : keys) {
        put_le(pk, k, 8);
    }
    std::vector<uint8_t> td;
    put_le(td, tag_bit, 1);
    put_le(td, delta, 4);
    return TcfKeyPair(mode, TcfPublicKey::from_bytes(pk), std::move(td), delta);
}

TcfKeyPair TcfKeyPair::from_json(const nlohmann::json &j) {
    if (!j.is_object() || !j.contains("mode") || !j.contains("pk") || !j.contains("td") || !j.contains("n")) {
        throw ValidationError("key JSON needs mode, n, pk and td");
    }
    std::string m = j["mode"].get<std::string>();
    if (m != "f" && m != "g") {
        throw ValidationError("key JSON mode must be \"f\" or \"g\"");
    }
    TcfMode mode = m == "f" ? TcfMode::TwoToOne : TcfMode::Injective;
    TcfPublicKey pk = TcfPublicKey::from_bytes(from_hex(j["pk"].get<std::string>()));
    if (j["n"].get<unsigned>() != pk.n()) {
        throw ValidationError("key JSON n disagrees with the public key");
    }
    std::vector<uint8_t> td = from_hex(j["td"].get<std::string>());
    size_t pos = 0;
    uint64_t tag = get_le(td, pos, 1);
    uint64_t delta = get_le(td, pos, 4);
    if (pos != td.size() || tag != (mode == TcfMode::Injective ? 1u : 0u) || tag != pk.tag_bit_ ||
        delta != (mode == TcfMode::TwoToOne ? pk.shift_ : 0) || (mode == TcfMode::TwoToOne && delta == 0)) {
        throw ValidationError("trapdoor is inconsistent with the public key");
    }
    return TcfKeyPair(mode, std::move(pk), std::move(td), delta);
}

std::vector<Preimage> TcfKeyPair::invert(uint64_t y) const {
    unsigned n = pk_.n();
    if ((y & ~mask_bits(n + 1)) != 0) {
        throw NoPreimageError("image has more than n + 1 bits");
    }
    uint64_t z = pk_.perm_.inverse(y);
    int top = (int)(z >> n);
    uint64_t low = z & mask_bits(n);
    if (mode_ == TcfMode::TwoToOne) {
        if (top != 0) {
            throw NoPreimageError("image is outside the range of the two-to-one function");
        }
        return {{0, low}, {1, low ^ delta_}};
    }
    return {{top, low}};
}

nlohmann::json TcfKeyPair::to_json() const {
    return {{"mode", mode_ == TcfMode::TwoToOne ? "f" : "g"},
            {"n", pk_.n()},
            {"pk", to_hex(pk_.bytes())},
            {"td", to_hex(td_)}};
}

const char *tcf_mode_name(TcfMode mode) {
    return mode == TcfMode::TwoToOne ? "two-to-one" : "injective";
}

Z4Vector j_encode(uint64_t x, unsigned n) {
    if (n % 2 != 0) {
        throw ValidationError("J encoding needs an even bit length");
    }
    Z4Vector out(n / 2);
    for (unsigned j = 0; j < n / 2; j++) {
        out[j] = (uint8_t)((x >> (2 * j)) & 3);
    }
    return out;
}

void validate_z4_vector(const Z4Vector &d, unsigned n) {
    if (n % 2 != 0 || d.size() != n / 2) {
        throw ValidationError("equation has the wrong length");
    }
    for (uint8_t v : d) {
        if (v > 3) {
            throw ValidationError("equation digit outside Z4");
        }
    }
}

unsigned z4_theta_code(const Z4Vector &d, uint64_t x0, uint64_t x1, unsigned n) {
    validate_z4_vector(d, n);
    Z4Vector j0 = j_encode(x0, n);
    Z4Vector j1 = j_encode(x1, n);
    unsigned t = 0;
    for (size_t k = 0; k < d.size(); k++) {
        t += d[k] * (unsigned)((4 + j1[k] - j0[k]) % 4);
    }
    return t % 4;
}

std::optional<ObservableHint> w_v_from_d(const Z4Vector &d, uint64_t x0, uint64_t x1, unsigned n) {
    if (x0 == x1) {
        validate_z4_vector(d, n);
        return std::nullopt;
    }
    unsigned t = z4_theta_code(d, x0, x1, n);
    return ObservableHint{(int)(t & 1), (int)(t >> 1)};
}

Z4Vector random_z4_vector(size_t length, Rng &rng) {
    Z4Vector d(length);
    for (auto &v : d) {
        v = (uint8_t)rng.below(4);
    }
    return d;
}

std::string to_hex(const std::vector<uint8_t> &bytes) {
    static const char *digits = "0123456789abcdef";
    std::string s;
    for (uint8_t b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 15]);
    }
    return s;
}

std::vector<uint8_t> from_hex(const std::string &hex) {
    if (hex.size() % 2 != 0) {
        throw ValidationError("hex string has odd length");
    }
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw ValidationError("bad hex digit");
    };
    std::vector<uint8_t> out;
    for (size_t k = 0; k < hex.size(); k += 2) {
        out.push_back((uint8_t)(nibble(hex[k]) * 16 + nibble(hex[k + 1])));
    }
    return out;
}

}  // namespace nelsim
