// Copyright 2026 The ea-lab Authors.
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "ealab/rng.hpp"

#include <cmath>

#include <boost/math/special_functions/erf.hpp>

namespace ealab {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) noexcept {
    const unsigned __int128 product = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(product >> 64);
    lo = static_cast<std::uint64_t>(product);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> c, std::array<std::uint64_t, 2> k) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Stream::Stream(std::uint64_t seed, std::string label)
    : seed_(seed), label_(std::move(label)), key_{seed, fnv1a64(label_)} {}

std::uint64_t Stream::bits(std::uint64_t index) const noexcept {
    const auto block = philox4x64({index >> 2, 0, 0, 0}, key_);
    return block[index & 3];
}

double Stream::uniform(std::uint64_t index) const noexcept { return to_unit_open(bits(index)); }

double Stream::normal(std::uint64_t index) const {
    // Phi^{-1}(u) = -sqrt(2) * erfc^{-1}(2u)
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * uniform(index));
}

Stream Stream::child(std::string_view suffix) const {
    std::string label = label_;
    label += '/';
    label += suffix;
    return Stream(seed_, std::move(label));
}

std::mt19937_64 Stream::engine() const {
    std::seed_seq seq{static_cast<std::uint32_t>(bits(0)), static_cast<std::uint32_t>(bits(0) >> 32),
                      static_cast<std::uint32_t>(bits(1)), static_cast<std::uint32_t>(bits(1) >> 32),
                      static_cast<std::uint32_t>(bits(2)), static_cast<std::uint32_t>(bits(2) >> 32),
                      static_cast<std::uint32_t>(bits(3)), static_cast<std::uint32_t>(bits(3) >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace ealab
