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

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ealab/disorder.hpp"
#include "ealab/lattice.hpp"

namespace ealab {

using Spin = std::int8_t;

/// One +/-1 spin per vertex. Ordered lexicographically with -1 < +1.
class SpinConfiguration {
  public:
    SpinConfiguration() = default;
    explicit SpinConfiguration(std::vector<Spin> spins);
    static SpinConfiguration all_up(std::size_t n) { return SpinConfiguration(std::vector<Spin>(n, 1)); }

    std::size_t size() const noexcept { return spins_.size(); }
    Spin operator[](Vertex v) const { return spins_[v]; }
    void set(Vertex v, Spin s);
    std::span<const Spin> spins() const noexcept { return spins_; }
    SpinConfiguration flipped() const;
    std::string to_string() const;

    friend bool operator==(const SpinConfiguration&, const SpinConfiguration&) = default;
    friend auto operator<=>(const SpinConfiguration& a, const SpinConfiguration& b) { return a.spins_ <=> b.spins_; }

  private:
    std::vector<Spin> spins_;
};

/// Free, or Fixed with one spin per boundary vertex in the order of g.boundary().
class BoundaryCondition {
  public:
    static BoundaryCondition free() { return BoundaryCondition(); }
    static BoundaryCondition fixed(std::vector<Spin> gamma);
    static BoundaryCondition all_plus(const LatticeGraph& g);

    bool is_free() const noexcept { return !fixed_; }
    bool is_fixed() const noexcept { return fixed_; }
    std::span<const Spin> assignment() const noexcept { return gamma_; }

    /// Throws InvalidBoundaryCondition unless the assignment covers exactly B (and B is nonempty).
    void validate(const LatticeGraph& g) const;

  private:
    bool fixed_ = false;
    std::vector<Spin> gamma_;
};

struct PairConstraint {
    Vertex i;
    Vertex j;
    /// Requires sigma_i * sigma_j == sign.
    Spin sign;
};

enum class SolveMethod { Exhaustive, BranchBound, Elimination, Anneal };

std::string method_name(SolveMethod m);

struct SolveResult {
    SpinConfiguration config;
    double energy = 0.0;
    SolveMethod method = SolveMethod::Exhaustive;
    bool exact = false;
    bool tie_detected = false;
    std::size_t free_spin_count = 0;
};

enum class ExactMethod { Auto, Exhaustive, BranchBound, Elimination };

struct ExactOptions {
    ExactMethod method = ExactMethod::Auto;
    /// Auto picks Exhaustive up to this many free spins, then BranchBound up to branch_bound_cap.
    std::size_t exhaustive_cap = 24;
    std::size_t branch_bound_cap = 40;
    /// Largest frontier (active spins) the elimination table may hold.
    std::size_t elimination_width_cap = 20;
};

struct AnnealSchedule {
    double t_init = 2.0;
    double t_final = 0.05;
    int sweeps = 2000;
};

struct AnnealOptions {
    AnnealSchedule schedule;
    int restarts = 32;
};

/// H_J(sigma) = -sum_{ij in E} J_ij sigma_i sigma_j, summed in edge-index order.
double energy(const LatticeGraph& g, const Disorder& J, const SpinConfiguration& sigma);

/// Global minimizer. Free BC results are gauge-canonical. Near-ties (1e-12) between
/// distinct optima resolve to the lexicographically smallest configuration.
SolveResult solve_exact(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc,
                        const ExactOptions& options = {});

/// Simulated annealing with a geometric schedule and a final zero-temperature quench,
/// best over restarts. Restart r draws from the stream (seed, "anneal/<r>").
SolveResult solve_anneal(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc,
                         const AnnealOptions& options, std::uint64_t seed);

/// Minimizer subject to sigma_i sigma_j = c.sign. With zero_edge the coupling on
/// {i, j} is dropped; the argmin does not change, only the reported energy.
SolveResult solve_constrained(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc,
                              const PairConstraint& c, bool zero_edge, const ExactOptions& options = {});

/// Under Free BC, returns sigma or -sigma with +1 at the lowest-indexed interior vertex.
/// Identity under Fixed BC.
SpinConfiguration canonicalize(const LatticeGraph& g, const BoundaryCondition& bc, const SpinConfiguration& sigma);

/// How experiments pick a solver: the cheapest exact method that fits, else annealing.
struct SolverPolicy {
    std::size_t exhaustive_cap = 24;
    /// 0 disables elimination.
    std::size_t elimination_width_cap = 16;
    bool allow_anneal = true;
    AnnealOptions anneal;
};

/// Dispatches according to the policy; `constraint` may be null.
SolveResult solve_with_policy(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc,
                              const SolverPolicy& policy, std::uint64_t anneal_seed,
                              const PairConstraint* constraint = nullptr, bool zero_edge = false);

}  // namespace ealab
