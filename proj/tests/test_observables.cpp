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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "ealab/error.hpp"
#include "ealab/observables.hpp"
#include "oracles.hpp"

using namespace ealab;

namespace {

Errc error_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an ealab::Error");
    return Errc::Io;
}

LatticeGraph path(std::size_t n, std::vector<Vertex> boundary = {}) {
    std::vector<Edge> edges;
    for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
    return build_explicit(n, edges, VertexSet(boundary));
}

SpinConfiguration cfg(std::vector<Spin> s) { return SpinConfiguration(std::move(s)); }

Disorder gaussian(std::mt19937_64& rng, std::size_t m) {
    std::normal_distribution<double> N;
    std::vector<double> v(m);
    for (auto& x : v) x = N(rng);
    return Disorder(std::move(v));
}

VertexSet subset(std::span<const Vertex> pool, std::uint64_t mask) {
    std::vector<Vertex> a;
    for (std::size_t k = 0; k < pool.size(); ++k) {
        if ((mask >> k) & 1) a.push_back(pool[k]);
    }
    return VertexSet(a);
}

// Naive cut sum: scan every edge and test membership directly.
double naive_delta(const LatticeGraph& g, const Disorder& J, const SpinConfiguration& s, const VertexSet& A) {
    double sum = 0;
    for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
        const auto& ed = g.edge(e);
        if (A.contains(ed.u) != A.contains(ed.v)) sum += J[e] * s[ed.u] * s[ed.v];
    }
    return 2 * sum;
}

std::size_t naive_cut(const LatticeGraph& g, const VertexSet& A) {
    std::size_t n = 0;
    for (const auto& ed : g.edges()) n += A.contains(ed.u) != A.contains(ed.v);
    return n;
}

// Brute-force F over all interior subsets, with the lexicographic tie rule.
std::pair<double, VertexSet> brute_valley(const LatticeGraph& g, const Disorder& J, const std::vector<Spin>& gamma) {
    const auto gs = oracle::brute_ground_state(g, J, gamma);
    SpinConfiguration s(gs.config);
    const auto pool = g.interior().items();
    double best = std::numeric_limits<double>::infinity();
    VertexSet arg;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << pool.size()); ++mask) {
        auto A = subset(pool, mask);
        const std::size_t n = pool.size();
        if (!(n <= 4 * A.size() && 4 * A.size() <= 3 * n)) continue;
        const auto cut = naive_cut(g, A);
        const double r = cut == 0 ? 0.0 : naive_delta(g, J, s, A) / static_cast<double>(cut);
        if (r < best - 1e-12 || (r <= best + 1e-12 && A < arg)) {
            best = std::min(best, r);
            arg = A;
        }
    }
    return {best, arg};
}

// Constrained minimizers by brute force, then the complement-reduced disagreement set.
VertexSet brute_critical(const LatticeGraph& g, const Disorder& J, EdgeIndex e) {
    const auto& ed = g.edge(e);
    auto a = oracle::brute_ground_state(g, J, {}, PairConstraint{ed.u, ed.v, 1}, true).config;
    auto b = oracle::brute_ground_state(g, J, {}, PairConstraint{ed.u, ed.v, -1}, true).config;
    std::vector<Vertex> dis, rest;
    for (Vertex v = 0; v < g.num_vertices(); ++v) (a[v] != b[v] ? dis : rest).push_back(v);
    const std::size_t n = g.num_vertices();
    if (2 * dis.size() > n || (2 * dis.size() == n && !dis.empty() && dis[0] == 0)) return VertexSet(rest);
    return VertexSet(dis);
}

}  // namespace

TEST_CASE("site overlap examples") {
    auto g = build_cube(Topology::open_cube(2, 3));  // four interior sites
    auto s = SpinConfiguration::all_up(g.num_vertices());
    auto same = site_overlap(g, s, s);
    CHECK(same.R == 1.0);
    CHECK(same.droplet_size == 0);

    auto half = s;
    half.set(g.interior()[0], -1);
    half.set(g.interior()[1], -1);
    CHECK(site_overlap(g, s, half).R == 0.0);

    auto neg = s;
    for (Vertex v : g.interior()) neg.set(v, -1);
    auto o = site_overlap(g, s, neg);
    CHECK(o.R == -1.0);
    CHECK(o.droplet_size == 4);
    CHECK(error_of([&] { site_overlap(g, s, cfg({1, 1})); }) == Errc::DimensionMismatch);
}

TEST_CASE("overlap-droplet identity holds exactly") {
    std::mt19937_64 rng(1);
    auto g = build_cube(Topology::open_cube(2, 5));
    for (int t = 0; t < 200; ++t) {
        auto a = cfg(oracle::random_spins(rng, g.num_vertices()));
        auto b = cfg(oracle::random_spins(rng, g.num_vertices()));
        auto o = site_overlap(g, a, b);
        CHECK(static_cast<std::int64_t>(o.interior_size) - 2 * static_cast<std::int64_t>(o.droplet_size) ==
              o.agreement_sum);
        CHECK(o.R_squared == o.R * o.R);
        CHECK(std::abs(static_cast<double>(o.droplet_size) - o.interior_size * (1 - o.R) / 2) < 1e-12);
    }
}

TEST_CASE("flip_region") {
    auto g = path(3);
    auto s = cfg({1, 1, -1});
    CHECK(flip_region(g, BoundaryCondition::free(), s, VertexSet{}) == s);
    CHECK(flip_region(g, BoundaryCondition::free(), s, VertexSet({2})) == cfg({1, 1, 1}));
    auto twice = flip_region(g, BoundaryCondition::free(),
                             flip_region(g, BoundaryCondition::free(), s, VertexSet({0, 2})), VertexSet({0, 2}));
    CHECK(twice == s);
    auto gb = path(3, {0});
    CHECK(error_of([&] { flip_region(gb, BoundaryCondition::fixed({1}), s, VertexSet({0, 1})); }) ==
          Errc::RegionTouchesBoundary);
}

TEST_CASE("interface energy example") {
    auto g = path(3);
    Disorder J(std::vector<double>{1.0, -0.5});
    auto s = cfg({1, 1, -1});
    CHECK(interface_energy(g, J, BoundaryCondition::free(), s, VertexSet({2})) == doctest::Approx(1.0));
    CHECK(interface_energy(g, J, BoundaryCondition::free(), s, VertexSet{}) == 0.0);
}

TEST_CASE("interface energy: both routes agree and ground states are stable under every region") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 100; ++t) {
        const bool fixed = t % 2 == 0;
        LatticeGraph g = fixed ? build_cube(Topology::open_cube(2, 3)) : oracle::random_connected_graph(rng, 9, 6);
        auto J = gaussian(rng, g.num_edges());
        std::vector<Spin> gamma;
        auto bc = BoundaryCondition::free();
        if (fixed) {
            gamma = oracle::random_spins(rng, g.boundary().size());
            bc = BoundaryCondition::fixed(gamma);
        }
        SpinConfiguration gs(oracle::brute_ground_state(g, J, gamma).config);
        const auto pool = g.interior().items();
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pool.size()); ++mask) {
            auto A = subset(pool, mask);
            const double d = interface_energy(g, J, bc, gs, A);
            CHECK(std::abs(d - naive_delta(g, J, gs, A)) < 1e-12);
            CHECK(d >= -1e-9);
        }
    }
}

TEST_CASE("droplet examples and complement convention") {
    auto g = path(4);
    auto d = droplet(g, BoundaryCondition::free(), cfg({1, 1, -1, -1}), cfg({1, 1, 1, 1}));
    CHECK(d.region == VertexSet({2, 3}));
    REQUIRE(d.boundary.size() == 1);
    CHECK(g.edge(d.boundary[0]) == Edge{1, 2});

    auto s = cfg({1, -1, 1, 1});
    auto none = droplet(g, BoundaryCondition::free(), s, s, nullptr);
    CHECK(none.region.empty());
    CHECK(none.ratio == 0.0);

    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        auto h = oracle::random_connected_graph(rng, 5 + t % 10, 4);
        auto a = cfg(oracle::random_spins(rng, h.num_vertices()));
        auto b = cfg(oracle::random_spins(rng, h.num_vertices()));
        auto r = droplet(h, BoundaryCondition::free(), a, b, nullptr);
        CHECK(2 * r.size <= h.num_vertices());
        if (2 * r.size == h.num_vertices()) CHECK_FALSE(r.region.contains(0));
        CHECK(r.boundary_size == naive_cut(h, r.region));
    }
}

TEST_CASE("valley statistic example") {
    auto g = path(4);
    Disorder J(std::vector<double>{1.0, -0.5, 0.8});
    auto v = valley_statistic_exact(g, J, BoundaryCondition::free());
    CHECK(v.F == doctest::Approx(1.0));
    CHECK(v.region == VertexSet({0, 1}));
    CHECK(v.boundary_size == 1);
}

TEST_CASE("valley statistic matches brute-force enumeration") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 40; ++t) {
        const bool fixed = t % 2 == 0;
        LatticeGraph g = fixed ? build_cube(Topology::open_cube(2, 4)) : oracle::random_connected_graph(rng, 10, 6);
        if (fixed && t % 4 == 0) g = build_cube(Topology::open_cube(1, 10));
        auto J = gaussian(rng, g.num_edges());
        std::vector<Spin> gamma;
        auto bc = BoundaryCondition::free();
        if (fixed) {
            gamma = oracle::random_spins(rng, g.boundary().size());
            bc = BoundaryCondition::fixed(gamma);
        }
        if (g.num_vertices() > 16) {
            // 5x5 grid: brute force over |V| = 25 is too slow, so check against the ground state the solver returned.
            auto v = valley_statistic_exact(g, J, bc);
            CHECK(v.F >= 0.0);
            CHECK(admissible_size(v.region.size(), g.interior().size()));
            CHECK(std::abs(v.delta - naive_delta(g, J, v.ground_state, v.region)) < 1e-12);
            continue;
        }
        auto [F, A] = brute_valley(g, J, gamma);
        auto v = valley_statistic_exact(g, J, bc);
        CHECK(std::abs(v.F - F) < 1e-12);
        CHECK(v.region == A);
    }
}

TEST_CASE("valley statistic is invariant under a gauge transformation of the couplings") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 30; ++t) {
        auto g = oracle::random_connected_graph(rng, 8, 5);
        auto J = gaussian(rng, g.num_edges());
        auto tau = oracle::random_spins(rng, 8);
        std::vector<double> Jg(J.values().begin(), J.values().end());
        for (EdgeIndex e = 0; e < g.num_edges(); ++e) Jg[e] *= tau[g.edge(e).u] * tau[g.edge(e).v];
        auto a = valley_statistic_exact(g, J, BoundaryCondition::free());
        auto b = valley_statistic_exact(g, Disorder(Jg), BoundaryCondition::free());
        CHECK(std::abs(a.F - b.F) < 1e-12);
        CHECK(a.region == b.region);
    }
}

TEST_CASE("valley statistic cap") {
    auto g = build_cube(Topology::open_cube(2, 6));
    CHECK(error_of([&] { valley_statistic_exact(g, sample_disorder(g, 1, "J"), BoundaryCondition::all_plus(g)); }) ==
          Errc::TooLarge);
}

TEST_CASE("valley upper bound") {
    CHECK(valley_bound_constant(0.5, 1.2) == doctest::Approx(4.1569219381653).epsilon(1e-12));

    auto g = build_cube(Topology::open_cube(2, 4));
    auto bc = BoundaryCondition::all_plus(g);
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        const double p = std::array{0.1, 0.3, 0.5}[seed % 3];
        auto env = perturb(sample_disorder(g, seed, "J"), sample_disorder(g, seed, "Jprime"),
                           PerturbationSpec(PerturbationKind::GaussianRotation, p), seed);
        auto vb = valley_upper_bound(g, env, bc);
        REQUIRE(vb.exact);
        CHECK(vb.bound_ok);
        CHECK(vb.report.ratio <= vb.bound + 1e-9);
        ++checked;
    }
    CHECK(checked == 150);

    auto J = sample_disorder(g, 3, "J");
    auto tiny = perturb(J, sample_disorder(g, 3, "Jprime"), PerturbationSpec(PerturbationKind::GaussianRotation, 1e-14), 3);
    auto vb = valley_upper_bound(g, tiny, bc);
    CHECK(vb.report.region.empty());
    CHECK(vb.report.ratio == 0.0);
    CHECK(vb.bound_ok);
    CHECK_FALSE(vb.size_ok);

    auto res = perturb(J, sample_disorder(g, 3, "Jprime"), PerturbationSpec(PerturbationKind::Resample, 0.3), 3);
    CHECK(error_of([&] { valley_upper_bound(g, res, bc); }) == Errc::WrongKind);
}

TEST_CASE("F_exact never exceeds the perturbation ratio when the droplet is admissible") {
    auto g = build_cube(Topology::open_cube(1, 11));  // 10 interior sites
    auto bc = BoundaryCondition::all_plus(g);
    int admissible = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto env = perturb(sample_disorder(g, seed, "J"), sample_disorder(g, seed, "Jprime"),
                           PerturbationSpec(PerturbationKind::GaussianRotation, 0.3), seed);
        auto vb = valley_upper_bound(g, env, bc);
        if (!vb.size_ok) continue;
        ++admissible;
        auto F = valley_statistic_exact(g, env.original, bc);
        CHECK(F.F <= vb.report.ratio + 1e-12);
    }
    CHECK(admissible > 10);
}

TEST_CASE("critical droplet example") {
    auto g = path(3);
    Disorder J(std::vector<double>{1.0, -0.5});
    auto c = critical_droplet(g, J, BoundaryCondition::free(), 0);
    CHECK(c.H1 == doctest::Approx(-0.5));
    CHECK(c.H2 == doctest::Approx(-0.5));
    CHECK(c.threshold == doctest::Approx(0.0));
    CHECK(c.region == VertexSet({0}));
    CHECK(c.size == 1);
    CHECK(c.exact);
    CHECK(c.consistent == true);
}

TEST_CASE("critical droplets on trees are the smaller side of the cut") {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 40; ++t) {
        auto g = oracle::random_tree(rng, 4 + t % 12);
        auto J = gaussian(rng, g.num_edges());
        const auto e = static_cast<EdgeIndex>(rng() % g.num_edges());
        // Component of edge(e).v after removing e, by DFS over the other edges.
        std::vector<Vertex> side{g.edge(e).v}, stack{g.edge(e).v};
        std::vector<bool> seen(g.num_vertices(), false);
        seen[g.edge(e).v] = seen[g.edge(e).u] = true;
        while (!stack.empty()) {
            const Vertex x = stack.back();
            stack.pop_back();
            for (const auto& nb : g.neighbors(x)) {
                if (nb.edge == e || seen[nb.vertex]) continue;
                seen[nb.vertex] = true;
                side.push_back(nb.vertex);
                stack.push_back(nb.vertex);
            }
        }
        auto c = critical_droplet(g, J, BoundaryCondition::free(), e);
        CHECK(c.region == complement_reduce(g, BoundaryCondition::free(), VertexSet(side)));
        CHECK(c.boundary_size == 1);
    }
}

TEST_CASE("critical droplets match the brute-force constrained oracle") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 60; ++t) {
        LatticeGraph g = t % 2 ? build_cube(Topology::torus(1, 3 + t % 10)) : oracle::random_connected_graph(rng, 6 + t % 7, 5);
        auto J = gaussian(rng, g.num_edges());
        const auto e = static_cast<EdgeIndex>(rng() % g.num_edges());
        auto c = critical_droplet(g, J, BoundaryCondition::free(), e);
        CHECK(c.region == brute_critical(g, J, e));
        CHECK(2 * c.size <= g.num_vertices());
        CHECK(c.consistent == true);
    }
}

TEST_CASE("critical droplets on the torus satisfy isoperimetry and the threshold rule") {
    auto g = build_cube(Topology::torus(2, 4));
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto J = sample_disorder(g, seed, "J");
        auto c = critical_droplet(g, J, BoundaryCondition::free(), static_cast<EdgeIndex>(seed % g.num_edges()));
        CHECK(c.exact);
        CHECK(c.consistent == true);
        CHECK(2 * c.size <= g.num_vertices());
        CHECK(isoperimetric_ok(c.boundary_size, c.size, 2));
        if (c.size > 0) CHECK(c.boundary_size >= 4);
    }
    CHECK(isoperimetric_ok(4, 1, 2));
    CHECK_FALSE(isoperimetric_ok(3, 4, 2));
    CHECK(isoperimetric_ok(0, 0, 2));
}

TEST_CASE("boundary dependence examples") {
    auto g = build_cube(Topology::open_cube(1, 3));  // path 0-1-2-3 with B = {0, 3}
    auto ev = [&](std::vector<double> j) { return boundary_dependence(g, Disorder(j), 1, 2); };
    auto a = ev({2.0, 0.1, 2.0});
    CHECK(a.event);
    CHECK(a.r == 1);
    CHECK_FALSE(ev({2.0, 10.0, 2.0}).event);
    CHECK_FALSE(ev({0.0001, 1.0, 0.0001}).event);
    CHECK(ev({2.0, 10.0, 2.0}).classes_enumerated == 2);
}

TEST_CASE("boundary dependence agrees with enumerating every boundary condition by brute force") {
    auto g = build_cube(Topology::open_cube(2, 2));  // 3x3 grid, one interior site
    auto g1 = build_cube(Topology::open_cube(1, 6));
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        for (const LatticeGraph* h : {&g, &g1}) {
            auto J = sample_disorder(*h, seed, "J");
            for (EdgeIndex e = 0; e < h->num_edges(); ++e) {
                const auto& ed = h->edge(e);
                int seen = 0;
                const auto nb = h->boundary().size();
                for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nb); ++mask) {
                    std::vector<Spin> gamma(nb);
                    for (std::size_t k = 0; k < nb; ++k) gamma[k] = (mask >> k) & 1 ? 1 : -1;
                    auto gs = oracle::brute_ground_state(*h, J, gamma).config;
                    seen |= gs[ed.u] * gs[ed.v] > 0 ? 1 : 2;
                }
                auto bd = boundary_dependence(*h, J, ed.u, ed.v);
                CHECK(bd.event == (seen == 3));
                CHECK(bd.r == std::min(h->boundary_distance(ed.u), h->boundary_distance(ed.v)));
            }
        }
    }
}

TEST_CASE("halved enumeration agrees with the full enumeration") {
    auto g = build_cube(Topology::open_cube(2, 3));  // 8 active boundary sites
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto J = sample_disorder(g, seed, "J");
        for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
            const auto& ed = g.edge(e);
            auto half = boundary_dependence(g, J, ed.u, ed.v);
            BoundaryDependenceOptions full;
            full.full_enumeration = true;
            CHECK(half.event == boundary_dependence(g, J, ed.u, ed.v, full).event);
        }
    }
}

TEST_CASE("boundary dependence errors and budget") {
    auto torus = build_cube(Topology::torus(2, 3));
    CHECK(error_of([&] { boundary_dependence(torus, sample_disorder(torus, 1, "J"), 0, 1); }) == Errc::NotOpenCube);
    auto big = build_cube(Topology::open_cube(2, 6));
    CHECK(error_of([&] { boundary_dependence(big, sample_disorder(big, 1, "J"), 8, 9); }) == Errc::TooLarge);
    auto g5 = build_cube(Topology::open_cube(2, 5));  // 16 active boundary, 16 interior: within budget
    const int a[] = {1, 1}, b[] = {1, 2};
    auto bd = boundary_dependence(g5, sample_disorder(g5, 2, "J"), g5.vertex_at(a), g5.vertex_at(b));
    CHECK(bd.r == 1);
    auto g = build_cube(Topology::open_cube(2, 3));
    CHECK(error_of([&] { boundary_dependence(g, sample_disorder(g, 1, "J"), 5, 10); }) == Errc::InvalidConstraint);
}
