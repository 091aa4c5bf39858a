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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ealab/experiments.hpp"

namespace ealab {

/// Keys present in a parsed config file, so flags and per-experiment defaults only fill the gaps.
struct ConfigSource {
    ExperimentConfig config;
    std::vector<std::string> keys;

    bool has(std::string_view key) const;
};

/// Strict JSON config: unknown keys raise UnknownKey; malformed JSON, wrong types and invalid
/// values raise ParseError naming the key. The result is validated.
ConfigSource parse_config(std::string_view text);
ConfigSource load_config_source(const std::string& path);
ExperimentConfig load_config(const std::string& path);

/// Writes via a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);

struct VerifyItem {
    std::string name;
    std::size_t checks = 0;
    std::size_t failures = 0;
};

/// Built-in invariant suite: interface identity, overlap identity, ratio bound, threshold rule,
/// isoperimetry, exact-engine agreement and the valley oracle.
std::vector<VerifyItem> run_verify(std::uint64_t seed, unsigned threads);

/// Entry point of the ea-lab executable. args excludes the program name. Returns 0 on success,
/// 1 on usage errors and 2 on runtime errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ealab
