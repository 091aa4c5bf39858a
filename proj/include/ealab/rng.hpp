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

#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace ealab {

/// Philox4x64-10 block function (Salmon et al., SC'11).
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter, std::array<std::uint64_t, 2> key) noexcept;

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Counter-based stream keyed by (master seed, label). Draw k is a pure function
/// of (seed, label, k), so replicates can be generated in any order or in parallel.
class Stream {
  public:
    Stream(std::uint64_t seed, std::string label);

    std::uint64_t seed() const noexcept { return seed_; }
    const std::string& label() const noexcept { return label_; }

    std::uint64_t bits(std::uint64_t index) const noexcept;
    /// Uniform on the open interval (0, 1) with 52-bit resolution.
    double uniform(std::uint64_t index) const noexcept;
    /// Standard normal by inverse CDF of uniform(index).
    double normal(std::uint64_t index) const;

    /// Stream whose label is this label extended by "/" + suffix.
    Stream child(std::string_view suffix) const;

    /// Seeds a sequential engine for hot loops; the engine state derives from this stream only.
    std::mt19937_64 engine() const;

  private:
    std::uint64_t seed_;
    std::string label_;
    std::array<std::uint64_t, 2> key_;
};

/// Uniform (0, 1) from a raw 64-bit draw.
inline double to_unit_open(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

}  // namespace ealab
