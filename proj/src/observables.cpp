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

#include "ealab/observables.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "ealab/error.hpp"
#include "ealab/rng.hpp"
#include "solver/problem.hpp"

namespace ealab {

namespace {

void check_size(const LatticeGraph& g, const SpinConfiguration& s) {
    if (s.size() != g.num_vertices()) throw Error(Errc::DimensionMismatch, "configuration size differs from |V|");
}

VertexSet disagreement(const SpinConfiguration& a, const SpinConfiguration& b) {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < a.size(); ++v) {
        if (a[v] != b[v]) out.push_back(v);
    }
    return VertexSet(std::move(out));
}

SolveResult exact_ground_state(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc) {
    SolverPolicy exact;
    exact.allow_anneal = false;
    exact.elimination_width_cap = 20;
    return solve_with_policy(g, J, bc, exact, 0);
}

}  // namespace

OverlapSample site_overlap(const LatticeGraph& g, const SpinConfiguration& sigma, const SpinConfiguration& other) {
    check_size(g, sigma);
    check_size(g, other);
    OverlapSample out;
    out.interior_size = g.interior().size();
    for (Vertex v : g.interior()) {
        out.agreement_sum += sigma[v] * other[v];
        out.droplet_size += sigma[v] != other[v];
    }
    out.R = static_cast<double>(out.agreement_sum) / static_cast<double>(out.interior_size);
    out.R_squared = out.R * out.R;
    return out;
}

SpinConfiguration flip_region(const LatticeGraph& g, const BoundaryCondition& bc, const SpinConfiguration& sigma,
                              const VertexSet& region) {
    check_size(g, sigma);
    SpinConfiguration out = sigma;
    for (Vertex v : region) {
        g.check_vertex(v);
        if (bc.is_fixed() && g.is_boundary(v)) {
            throw Error(Errc::RegionTouchesBoundary, "vertex " + std::to_string(v) + " is a fixed boundary spin");
        }
        out.set(v, static_cast<Spin>(-sigma[v]));
    }
    return out;
}

double interface_energy_cut(const LatticeGraph& g, const Disorder& J, const SpinConfiguration& sigma,
                            const VertexSet& region) {
    double sum = 0.0;
    for (EdgeIndex e : edge_boundary(g, region)) {
        const Edge& ed = g.edge(e);
        sum += J[e] * sigma[ed.u] * sigma[ed.v];
    }
    return 2.0 * sum;
}

double interface_energy(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc,
                        const SpinConfiguration& sigma, const VertexSet& region) {
    const SpinConfiguration flipped = flip_region(g, bc, sigma, region);
    const double by_flip = energy(g, J, flipped) - energy(g, J, sigma);
    const double by_cut = interface_energy_cut(g, J, sigma, region);
    if (std::abs(by_flip - by_cut) > 1e-9) {
        throw Error(Errc::InternalMismatch, "flip-and-evaluate gives " + std::to_string(by_flip) + " but the cut sum gives " +
                                                std::to_string(by_cut));
    }
    return by_cut;
}

VertexSet complement_reduce(const LatticeGraph& g, const BoundaryCondition& bc, const VertexSet& region) {
    if (bc.is_fixed()) return region;
    const std::size_t n = g.num_vertices();
    const std::size_t k = region.size();
    const bool take_complement = 2 * k > n || (2 * k == n && region.contains(0));
    if (!take_complement) return region;
    std::vector<Vertex> rest;
    rest.reserve(n - k);
    for (Vertex v = 0; v < n; ++v) {
        if (!region.contains(v)) rest.push_back(v);
    }
    return VertexSet(std::move(rest));
}

DropletReport droplet(const LatticeGraph& g, const BoundaryCondition& bc, const SpinConfiguration& sigma,
                      const SpinConfiguration& other, const Disorder* J) {
    check_size(g, sigma);
    check_size(g, other);
    DropletReport out;
    out.region = complement_reduce(g, bc, disagreement(sigma, other));
    out.boundary = edge_boundary(g, out.region);
    out.size = out.region.size();
    out.boundary_size = out.boundary.size();
    if (J) {
        out.delta = interface_energy(g, *J, bc, sigma, out.region);
        out.ratio = out.boundary_size == 0 ? 0.0 : out.delta / static_cast<double>(out.boundary_size);
    }
    return out;
}

bool admissible_size(std::size_t region_size, std::size_t interior_size) noexcept {
    return interior_size <= 4 * region_size && 4 * region_size <= 3 * interior_size;
}

ValleyStatistic valley_statistic_exact(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc,
                                       std::size_t interior_cap) {
    const auto& interior = g.interior();
    const std::size_t n = interior.size();
    if (n > interior_cap) {
        throw Error(Errc::TooLarge, std::to_string(n) + " interior sites exceed the enumeration cap of " +
                                        std::to_string(interior_cap));
    }
    ValleyStatistic out;
    out.ground_state = exact_ground_state(g, J, bc).config;
    const SpinConfiguration& s = out.ground_state;

    // Interior-local indexing; -1 marks a neighbor outside the interior (never in A).
    std::vector<std::int32_t> local(g.num_vertices(), -1);
    for (std::size_t k = 0; k < n; ++k) local[interior[k]] = static_cast<std::int32_t>(k);
    struct Incident {
        std::int32_t other;
        double w;
    };
    std::vector<std::vector<Incident>> inc(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (const Neighbor& nb : g.neighbors(interior[k])) {
            inc[k].push_back({local[nb.vertex], J[nb.edge] * s[interior[k]] * s[nb.vertex]});
        }
    }

    std::vector<std::uint8_t> in(n, 0);
    std::size_t size = 0, cut_n = 0;
    double cut_w = 0.0;
    double best = std::numeric_limits<double>::infinity();
    bool found = false;

    auto region_of = [&] {
        std::vector<Vertex> a;
        for (std::size_t k = 0; k < n; ++k) {
            if (in[k]) a.push_back(interior[k]);
        }
        return VertexSet(std::move(a));
    };

    const std::uint64_t steps = std::uint64_t{1} << n;
    for (std::uint64_t t = 1; t < steps; ++t) {
        const auto k = static_cast<std::size_t>(std::countr_zero(t));
        in[k] ^= 1;
        size = in[k] ? size + 1 : size - 1;
        for (const Incident& e : inc[k]) {
            const bool other_in = e.other >= 0 && in[static_cast<std::size_t>(e.other)];
            if (static_cast<bool>(in[k]) != other_in) {
                cut_w += e.w;
                ++cut_n;
            } else {
                cut_w -= e.w;
                --cut_n;
            }
        }
        if (!admissible_size(size, n)) continue;
        const double approx = cut_n == 0 ? 0.0 : 2.0 * cut_w / static_cast<double>(cut_n);
        if (found && approx > best + 1e-9) continue;
        // Candidates near the incumbent are re-evaluated from scratch so that equal cuts tie exactly.
        VertexSet A = region_of();
        const double delta = interface_energy_cut(g, J, s, A);
        const double ratio = cut_n == 0 ? 0.0 : delta / static_cast<double>(cut_n);
        if (!found || ratio < best - detail::kTieTolerance ||
            (ratio <= best + detail::kTieTolerance && A < out.region)) {
            best = found ? std::min(best, ratio) : ratio;
            out.region = std::move(A);
            out.boundary_size = cut_n;
            out.delta = delta;
            out.F = ratio;
            found = true;
        }
    }
    if (!found) throw Error(Errc::InvalidConfig, "no admissible region exists");
    return out;
}

double valley_bound_constant(double p, double max_abs_fresh) {
    return 2.0 * std::sqrt(2.0 * p - p * p) / (1.0 - p) * max_abs_fresh;
}

ValleyBound valley_upper_bound(const LatticeGraph& g, const CoupledEnvironments& env, const BoundaryCondition& bc,
                               const SolverPolicy& policy, std::uint64_t seed) {
    if (env.spec.kind() != PerturbationKind::GaussianRotation) {
        throw Error(Errc::WrongKind, "the ratio bound is derived for the Gaussian rotation");
    }
    const Stream stream(seed, "valley");
    const auto r0 = solve_with_policy(g, env.original, bc, policy, stream.bits(0));
    const auto r1 = solve_with_policy(g, env.perturbed, bc, policy, stream.bits(1));
    ValleyBound out;
    out.report = droplet(g, bc, r0.config, r1.config, &env.original);
    out.bound = valley_bound_constant(env.spec.p(), env.fresh.max_abs());
    out.bound_ok = out.report.ratio <= out.bound + 1e-9;
    std::size_t inside = 0;
    for (Vertex v : out.report.region) inside += !g.is_boundary(v);
    out.size_ok = admissible_size(inside, g.interior().size());
    out.exact = r0.exact && r1.exact;
    out.energy0 = r0.energy;
    out.energy1 = r1.energy;
    return out;
}

CriticalDroplet critical_droplet(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc, EdgeIndex e,
                                 const CriticalOptions& options) {
    if (e >= g.num_edges()) throw Error(Errc::InvalidConstraint, "edge index out of range");
    const Edge& ed = g.edge(e);
    const Stream stream(options.seed, "critical");
    const PairConstraint same{ed.u, ed.v, 1};
    const PairConstraint opposite{ed.u, ed.v, -1};
    const auto s1 = solve_with_policy(g, J, bc, options.policy, stream.bits(0), &same, true);
    const auto s2 = solve_with_policy(g, J, bc, options.policy, stream.bits(1), &opposite, true);

    CriticalDroplet out;
    out.edge = e;
    out.region = complement_reduce(g, bc, disagreement(s1.config, s2.config));
    out.size = out.region.size();
    out.boundary_size = edge_boundary(g, out.region).size();
    out.H1 = s1.energy;
    out.H2 = s2.energy;
    out.threshold = (out.H1 - out.H2) / 2.0;
    out.exact = s1.exact && s2.exact;
    if (options.check_consistency) {
        const auto gs = solve_with_policy(g, J, bc, options.policy, stream.bits(2));
        out.consistent = (gs.config[ed.u] * gs.config[ed.v] == 1) == (J[e] > out.threshold);
        out.exact = out.exact && gs.exact;
    }
    return out;
}

bool isoperimetric_ok(std::size_t boundary_size, std::size_t size, int dimension) {
    if (size == 0 || dimension < 2) return true;
    const double need = 2.0 * std::pow(static_cast<double>(size), 1.0 - 1.0 / dimension);
    return static_cast<double>(boundary_size) >= need - 1e-9;
}

BoundaryDependence boundary_dependence(const LatticeGraph& g, const Disorder& J, Vertex i, Vertex j,
                                       const BoundaryDependenceOptions& options) {
    if (g.topology().kind != TopologyKind::OpenCube) {
        throw Error(Errc::NotOpenCube, "boundary dependence is defined on open cubes");
    }
    if (J.size() != g.num_edges()) throw Error(Errc::DimensionMismatch, "disorder length differs from |E|");
    g.check_vertex(i);
    g.check_vertex(j);
    if (!g.find_edge(i, j)) throw Error(Errc::InvalidConstraint, "the pair is not an edge");

    std::vector<Vertex> active;
    for (Vertex b : g.boundary()) {
        for (const Neighbor& nb : g.neighbors(b)) {
            if (!g.is_boundary(nb.vertex)) {
                active.push_back(b);
                break;
            }
        }
    }
    if (active.size() > options.max_boundary || g.interior().size() > options.max_interior) {
        throw Error(Errc::TooLarge, std::to_string(active.size()) + " active boundary and " +
                                        std::to_string(g.interior().size()) + " interior sites exceed the budget");
    }

    BoundaryDependence out;
    out.r = std::min(g.boundary_distance(i), g.boundary_distance(j));
    if (g.is_boundary(i) && g.is_boundary(j)) {
        out.event = true;
        return out;
    }

    const auto P = detail::reduce(g, J, BoundaryCondition::all_plus(g), nullptr, false);
    const detail::EliminationPlan plan(P);
    detail::EliminationPlan::Workspace ws;

    struct Contribution {
        std::uint32_t var;
        double w;
    };
    std::vector<std::vector<Contribution>> contrib(active.size());
    std::vector<std::int32_t> active_index(g.num_vertices(), -1);
    for (std::size_t k = 0; k < active.size(); ++k) {
        active_index[active[k]] = static_cast<std::int32_t>(k);
        for (const Neighbor& nb : g.neighbors(active[k])) {
            if (!g.is_boundary(nb.vertex)) {
                contrib[k].push_back({static_cast<std::uint32_t>(P.var_of[nb.vertex]), J[nb.edge]});
            }
        }
    }

    std::vector<double> fields(P.field.begin(), P.field.end());
    std::vector<Spin> gamma(active.size(), 1);
    auto spin_of = [&](Vertex v, const std::vector<Spin>& x) -> int {
        if (g.is_boundary(v)) return gamma[static_cast<std::size_t>(active_index[v])];
        return x[static_cast<std::size_t>(P.var_of[v])];
    };
    auto product = [&] {
        const auto res = plan.solve(fields, ws);
        ++out.classes_enumerated;
        return spin_of(i, res.x) * spin_of(j, res.x);
    };

    const int first = product();
    const std::size_t lo = options.full_enumeration ? 0 : 1;
    const std::size_t bits = active.size() - lo;
    const std::uint64_t steps = std::uint64_t{1} << bits;
    for (std::uint64_t t = 1; t < steps; ++t) {
        const std::size_t k = lo + static_cast<std::size_t>(std::countr_zero(t));
        gamma[k] = static_cast<Spin>(-gamma[k]);
        for (const Contribution& c : contrib[k]) fields[c.var] += 2.0 * gamma[k] * c.w;
        if (product() != first) {
            out.event = true;
            break;
        }
    }
    return out;
}

}  // namespace ealab
