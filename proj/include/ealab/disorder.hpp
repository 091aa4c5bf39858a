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
#include <span>
#include <string>
#include <vector>

#include "ealab/lattice.hpp"

namespace ealab {

struct SeedTag {
    std::uint64_t seed = 0;
    std::string stream;

    friend bool operator==(const SeedTag&, const SeedTag&) = default;
};

/// One coupling per edge index.
class Disorder {
  public:
    Disorder() = default;
    /// Throws InvalidPerturbation if any value is not finite.
    explicit Disorder(std::vector<double> couplings, SeedTag tag = {});

    std::size_t size() const noexcept { return couplings_.size(); }
    double operator[](EdgeIndex e) const { return couplings_[e]; }
    std::span<const double> values() const noexcept { return couplings_; }
    const SeedTag& tag() const noexcept { return tag_; }

    double max_abs() const noexcept;
    Disorder negated() const;

    friend bool operator==(const Disorder&, const Disorder&) = default;

  private:
    std::vector<double> couplings_;
    SeedTag tag_;
};

/// |E| i.i.d. N(0,1) couplings from the counter-based stream (seed, stream).
Disorder sample_disorder(const LatticeGraph& g, std::uint64_t seed, const std::string& stream);
Disorder sample_disorder(std::size_t num_edges, std::uint64_t seed, const std::string& stream);

enum class PerturbationKind { GaussianRotation, Resample };

std::string perturbation_name(PerturbationKind kind);

class PerturbationSpec {
  public:
    /// Throws InvalidPerturbation unless 0 < p < 1.
    PerturbationSpec(PerturbationKind kind, double p);

    PerturbationKind kind() const noexcept { return kind_; }
    double p() const noexcept { return p_; }
    /// t = -ln(1 - p), the time parameter of the Ornstein-Uhlenbeck view of the rotation.
    double t() const noexcept;
    /// (1 - p, sqrt(2p - p^2)); squares sum to one.
    double keep_coefficient() const noexcept { return 1.0 - p_; }
    double fresh_coefficient() const noexcept;

  private:
    PerturbationKind kind_;
    double p_;
};

struct CoupledEnvironments {
    Disorder original;
    Disorder fresh;
    Disorder perturbed;
    PerturbationSpec spec;
    /// Resample kind only: true where the coupling was replaced. Empty for the rotation.
    std::vector<bool> resample_mask;
};

/// Couples J with an independent copy J'. The resample mask draws Bernoulli(p)
/// from the stream (mask_seed, mask_stream).
CoupledEnvironments perturb(const Disorder& original, const Disorder& fresh, const PerturbationSpec& spec,
                            std::uint64_t mask_seed, const std::string& mask_stream = "mask");

struct MomentReport {
    std::size_t n = 0;
    double mean_original = 0.0;
    double mean_perturbed = 0.0;
    double var_original = 0.0;
    double var_perturbed = 0.0;
    double correlation = 0.0;
};

/// Pools (J_e, J(p)_e) pairs across all environments.
MomentReport marginal_check(std::span<const CoupledEnvironments> envs);
MomentReport marginal_check(const CoupledEnvironments& env);

/// "edge_index,u,v,J" rows with 17 significant digits.
void write_disorder_csv(std::ostream& out, const LatticeGraph& g, const Disorder& J);
Disorder read_disorder_csv(std::istream& in, const LatticeGraph& g);

}  // namespace ealab
