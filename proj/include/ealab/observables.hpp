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
#include <optional>

#include "ealab/disorder.hpp"
#include "ealab/lattice.hpp"
#include "ealab/solver.hpp"

namespace ealab {

struct OverlapSample {
    double R = 0.0;
    double R_squared = 0.0;
    /// Interior sites where the two configurations disagree.
    std::size_t droplet_size = 0;
    std::size_t interior_size = 0;
    /// sum over the interior of sigma_i * sigma'_i; equals interior_size - 2 * droplet_size.
    std::int64_t agreement_sum = 0;
};

OverlapSample site_overlap(const LatticeGraph& g, const SpinConfiguration& sigma, const SpinConfiguration& other);

/// Negates sigma on A. Under a fixed boundary condition A must avoid B.
SpinConfiguration flip_region(const LatticeGraph& g, const BoundaryCondition& bc, const SpinConfiguration& sigma,
                              const VertexSet& region);

/// 2 * sum over the edge boundary of J_ij sigma_i sigma_j.
double interface_energy_cut(const LatticeGraph& g, const Disorder& J, const SpinConfiguration& sigma,
                            const VertexSet& region);

/// Energy cost of flipping A, evaluated by flipping and re-evaluating and by the cut sum.
/// Throws InternalMismatch if the two disagree by more than 1e-9.
double interface_energy(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc,
                        const SpinConfiguration& sigma, const VertexSet& region);

struct DropletReport {
    VertexSet region;
    EdgeSet boundary;
    std::size_t size = 0;
    std::size_t boundary_size = 0;
    /// Filled only when a disorder is supplied.
    double delta = 0.0;
    /// delta / boundary_size, or 0 for an empty edge boundary.
    double ratio = 0.0;
};

/// Smaller side of a disagreement set under a free boundary condition; on equal
/// sizes, the side without vertex 0. Identity under a fixed boundary condition.
VertexSet complement_reduce(const LatticeGraph& g, const BoundaryCondition& bc, const VertexSet& region);

/// Disagreement set between sigma and other, complement-reduced. With J, delta and ratio are
/// computed from J and sigma.
DropletReport droplet(const LatticeGraph& g, const BoundaryCondition& bc, const SpinConfiguration& sigma,
                      const SpinConfiguration& other, const Disorder* J = nullptr);

/// |V°| <= 4|A| <= 3|V°| in integer arithmetic.
bool admissible_size(std::size_t region_size, std::size_t interior_size) noexcept;

struct ValleyStatistic {
    double F = 0.0;
    VertexSet region;
    std::size_t boundary_size = 0;
    double delta = 0.0;
    SpinConfiguration ground_state;
};

/// Exact minimum of Delta(A)/|dA| over admissible A inside the interior, by enumeration.
/// Ties within 1e-12 go to the lexicographically smallest region.
ValleyStatistic valley_statistic_exact(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc,
                                       std::size_t interior_cap = 20);

struct ValleyBound {
    DropletReport report;
    /// 2 sqrt(2p - p^2) / (1 - p) * max |J'|.
    double bound = 0.0;
    bool bound_ok = false;
    bool size_ok = false;
    bool exact = false;
    double energy0 = 0.0;
    double energy1 = 0.0;
};

double valley_bound_constant(double p, double max_abs_fresh);

/// Ground states in J and J(p) through the policy, then the ratio of the resulting droplet.
ValleyBound valley_upper_bound(const LatticeGraph& g, const CoupledEnvironments& env, const BoundaryCondition& bc,
                               const SolverPolicy& policy = {}, std::uint64_t seed = 0);

struct CriticalDroplet {
    EdgeIndex edge = 0;
    VertexSet region;
    std::size_t size = 0;
    std::size_t boundary_size = 0;
    double H1 = 0.0;
    double H2 = 0.0;
    double threshold = 0.0;
    bool exact = false;
    /// Set when the unconstrained check ran: whether the ground-state pair sign agrees with
    /// sign(J_e - threshold).
    std::optional<bool> consistent;
};

struct CriticalOptions {
    SolverPolicy policy;
    std::uint64_t seed = 0;
    bool check_consistency = true;
};

CriticalDroplet critical_droplet(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc, EdgeIndex e,
                                 const CriticalOptions& options = {});

/// |dD| >= 2 |D|^(1 - 1/d) for nonempty D; vacuous (true) for empty D or d < 2.
bool isoperimetric_ok(std::size_t boundary_size, std::size_t size, int dimension);

struct BoundaryDependenceOptions {
    /// Boundary vertices adjacent to the interior; other boundary spins cannot affect the interior.
    std::size_t max_boundary = 16;
    std::size_t max_interior = 16;
    /// Enumerate every gamma instead of one per global-flip class.
    bool full_enumeration = false;
};

struct BoundaryDependence {
    bool event = false;
    std::size_t r = 0;
    std::uint64_t classes_enumerated = 0;
};

/// Whether sigma_i sigma_j in the ground state changes across boundary assignments on an open cube.
BoundaryDependence boundary_dependence(const LatticeGraph& g, const Disorder& J, Vertex i, Vertex j,
                                       const BoundaryDependenceOptions& options = {});

}  // namespace ealab
