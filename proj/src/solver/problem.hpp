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

// Internal representation shared by the solver engines and the boundary-enumeration
// observables. Not part of the installed interface.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ealab/solver.hpp"

namespace ealab::detail {

inline constexpr double kTieTolerance = 1e-12;

/// Ising problem over the free variables left after pinning fixed spins and merging
/// constrained pairs:
///   E(x) = offset - sum_{(a,b)} J_ab x_a x_b - sum_a h_a x_a.
/// Vertex v maps to sign_of[v] * x[var_of[v]], or to the constant sign_of[v] when var_of[v] < 0.
struct ReducedProblem {
    struct Coupling {
        std::uint32_t a;
        std::uint32_t b;
        double J;
    };

    std::size_t n_vars = 0;
    std::vector<std::int32_t> var_of;
    std::vector<Spin> sign_of;
    std::vector<double> field;
    std::vector<Coupling> couplings;
    std::vector<std::size_t> adj_start;
    std::vector<std::uint32_t> adj_var;
    std::vector<double> adj_J;
    double offset = 0.0;
    /// Set when no spin is pinned: the global flip is a symmetry, so this variable is
    /// held at the value that makes the lowest interior vertex +1.
    std::optional<std::pair<std::uint32_t, Spin>> gauge;

    double energy(std::span<const Spin> x) const;
    double local_field(std::span<const Spin> x, std::uint32_t a) const;
    SpinConfiguration lift(std::span<const Spin> x) const;
    /// Lexicographic comparison of lifted configurations.
    bool lifted_less(std::span<const Spin> x, std::span<const Spin> y) const;
    /// Negates x if needed so the gauge variable holds its canonical value.
    void canonicalize(std::vector<Spin>& x) const;
};

ReducedProblem reduce(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc,
                      const PairConstraint* constraint, bool zero_edge);

struct EngineResult {
    std::vector<Spin> x;
    bool tie = false;
};

/// Tracks the best assignment with the near-tie rule.
class Incumbent {
  public:
    explicit Incumbent(const ReducedProblem& problem) : problem_(&problem) {}

    double best() const noexcept { return best_; }
    void offer(double e, std::span<const Spin> x);
    EngineResult take() { return {std::move(x_), tie_}; }

  private:
    const ReducedProblem* problem_;
    double best_ = std::numeric_limits<double>::infinity();
    std::vector<Spin> x_;
    bool tie_ = false;
};

EngineResult solve_exhaustive(const ReducedProblem& problem);
EngineResult solve_branch_bound(const ReducedProblem& problem);
EngineResult solve_anneal(const ReducedProblem& problem, const AnnealOptions& options, std::uint64_t seed);

/// Dynamic programming over the variable order 0..n-1. The table is indexed by the
/// "frontier": processed variables that still have an unprocessed neighbor.
class EliminationPlan {
  public:
    explicit EliminationPlan(const ReducedProblem& problem);

    /// Largest table exponent (frontier size plus the incoming variable).
    std::size_t width() const noexcept { return width_; }
    /// Approximate work, sum over steps of table sizes.
    double cost() const noexcept { return cost_; }

    /// Scratch tables, reusable across solves of the same plan.
    struct Workspace {
        std::vector<double> table, next;
        std::vector<std::uint8_t> count, next_count;
        std::vector<std::vector<std::uint32_t>> back;
    };

    EngineResult solve() const { return solve(problem_->field); }
    /// Same couplings, replacement fields (one per variable).
    EngineResult solve(std::span<const double> fields) const {
        Workspace ws;
        return solve(fields, ws);
    }
    EngineResult solve(std::span<const double> fields, Workspace& ws) const;

  private:
    struct Step {
        std::uint32_t var;
        std::vector<std::uint32_t> neighbor_bit;
        std::vector<double> neighbor_J;
        std::vector<std::uint32_t> kept_bits;  // old-frontier bits that survive, in order
        bool keep_var;
        std::uint32_t old_size;
        std::uint32_t new_size;
    };

    const ReducedProblem* problem_;
    std::vector<Step> steps_;
    std::size_t width_ = 0;
    double cost_ = 0.0;
};

}  // namespace ealab::detail
